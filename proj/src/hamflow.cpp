#include "hamflow.hpp"

#include <cmath>
#include <string>

namespace cellflow::hamflow {

HamiltonianSample eval_hamiltonian_system(Vec2 p, const ForcingParams& params) {
    return {hamiltonian(p, params), velocity(p, params)};
}

double hamiltonian(Vec2 p, const ForcingParams& params) {
    return std::cos(p.x) * std::cos(p.y) - params.a * p.x + params.b * p.y;
}

Vec2 velocity(Vec2 p, const ForcingParams& params) {
    return {-std::cos(p.x) * std::sin(p.y) + params.b, std::sin(p.x) * std::cos(p.y) + params.a};
}

Mat2 velocity_jacobian(Vec2 p, const ForcingParams&) {
    const double sx = std::sin(p.x), cx = std::cos(p.x);
    const double sy = std::sin(p.y), cy = std::cos(p.y);
    return {sx * sy, -cx * cy, cx * cy, -sx * sy};
}

LatticeNode nearest_node(Vec2 p) {
    return {static_cast<int>(std::lround((p.x - kHalfPi) / kPi)),
            static_cast<int>(std::lround((p.y - kHalfPi) / kPi))};
}

namespace {

// Same-parity nodes differ by a symmetry of the field, so every saddle is a
// translate of one of these two base positions.
Vec2 base_seed(Parity parity, const ForcingParams& params) {
    const double am = std::asin(params.b - params.a);
    const double ap = std::asin(params.a + params.b);
    double X = 0.0, Y = 0.0;
    if (parity == Parity::Odd) {
        X = am;
        Y = kPi + ap;
    } else {
        X = kPi - am;
        Y = -ap;
    }
    return {(X + Y) / 2.0, (X - Y) / 2.0};
}

LatticeNode base_node(Parity parity) {
    return parity == Parity::Odd ? LatticeNode{0, -1} : LatticeNode{0, 0};
}

Vec2 newton_saddle(Vec2 p, const ForcingParams& params) {
    for (int it = 0; it < 50; ++it) {
        Vec2 v = velocity(p, params);
        if (v.norm() < 1e-12) return p;
        Mat2 J = velocity_jacobian(p, params);
        double det = J.det();
        if (det == 0.0 || !std::isfinite(det)) break;
        Vec2 step{(J.yy * v.x - J.xy * v.y) / det, (-J.yx * v.x + J.xx * v.y) / det};
        p = p - step;
    }
    if (velocity(p, params).norm() < 1e-12) return p;
    fail(ErrorCode::NonConvergence, "find_saddles: Newton did not converge in 50 iterations");
}

}  // namespace

SaddlePoint saddle_at(const LatticeNode& node, const ForcingParams& params) {
    const Parity parity = node.parity();
    const LatticeNode base = base_node(parity);
    Vec2 seed = base_seed(parity, params) +
                Vec2{kPi * (node.k1 - base.k1), kPi * (node.k2 - base.k2)};
    Vec2 pos = newton_saddle(seed, params);
    return {pos, parity, hamiltonian(pos, params), node};
}

std::vector<SaddlePoint> find_saddles(const ForcingParams& params, const Rect& window,
                                      double regime_bound) {
    params.validate_positive();
    if (params.a > regime_bound || params.b > regime_bound) {
        fail(ErrorCode::DomainError, "find_saddles: forcing outside the closed-form regime");
    }
    std::vector<SaddlePoint> out;
    const int k1_lo = static_cast<int>(std::ceil((window.x_min - kHalfPi) / kPi));
    const int k1_hi = static_cast<int>(std::floor((window.x_max - kHalfPi) / kPi));
    const int k2_lo = static_cast<int>(std::ceil((window.y_min - kHalfPi) / kPi));
    const int k2_hi = static_cast<int>(std::floor((window.y_max - kHalfPi) / kPi));
    for (int k1 = k1_lo; k1 <= k1_hi; ++k1) {
        for (int k2 = k2_lo; k2 <= k2_hi; ++k2) {
            out.push_back(saddle_at({k1, k2}, params));
        }
    }
    return out;
}

double k_constant(const ForcingParams& params) {
    const double am = params.b - params.a;
    const double ap = params.b + params.a;
    if (std::abs(ap) >= 1.0 || std::abs(am) >= 1.0) {
        fail(ErrorCode::DomainError, "k_constant: requires |a +- b| < 1");
    }
    auto F = [](double x) { return std::sqrt(1.0 - x * x) + x * std::asin(x); };
    return 0.5 * (F(am) - F(ap));
}

LinePair chess_lines(const ForcingParams& params, double h0) {
    const double K = k_constant(params);
    return {h0 - K, h0 + K};
}

Turn chess_turn_label(const LatticeNode& node, const ForcingParams& params, double h0,
                      double on_line_tol) {
    const LinePair lines = chess_lines(params, h0);
    const double c = node.parity() == Parity::Odd ? lines.c_odd : lines.c_even;
    const Vec2 g = node.position();
    const double side = params.b * g.y - params.a * g.x - c;
    if (std::abs(side) < on_line_tol) {
        fail(ErrorCode::OnLineError, "chess_turn_label: label line passes through node (" +
                                         std::to_string(node.k1) + "," +
                                         std::to_string(node.k2) + ")");
    }
    return side < 0.0 ? Turn::L : Turn::R;
}

ChessPath chess_path(const DirectedEdge& start, const ForcingParams& params, double h0,
                     int n_turns, double on_line_tol) {
    if (std::abs(start.dk1) + std::abs(start.dk2) != 1) {
        fail(ErrorCode::InvalidArgument, "chess_path: start edge must join lattice neighbours");
    }
    ChessPath path;
    path.h0 = h0;
    path.lines = chess_lines(params, h0);
    path.vertices.push_back(start.from);
    LatticeNode at = start.to();
    int dk1 = start.dk1, dk2 = start.dk2;
    for (int i = 0; i < n_turns; ++i) {
        path.vertices.push_back(at);
        Turn t = chess_turn_label(at, params, h0, on_line_tol);
        path.turns.push_back(t);
        // Rotate the direction by +-90 degrees.
        if (t == Turn::L) {
            int tmp = dk1;
            dk1 = -dk2;
            dk2 = tmp;
        } else {
            int tmp = dk1;
            dk1 = dk2;
            dk2 = -tmp;
        }
        at = {at.k1 + dk1, at.k2 + dk2};
    }
    path.vertices.push_back(at);
    return path;
}

double rigid_rotation_p0(double z, const ForcingParams& params) {
    if (!(params.b > 0.0)) fail(ErrorCode::DomainError, "rigid_rotation_p0: requires b > 0");
    return z + (params.a - params.b) / (2.0 * params.b);
}

}  // namespace cellflow::hamflow
