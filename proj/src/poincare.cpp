#include "poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cellflow::poincare {

using hamflow::LatticeNode;
using inertial::Direction;
using inertial::EventTrace;
using inertial::PlanarOptions;

namespace {

Vec2 unit(Vec2 v) { return v * (1.0 / v.norm()); }

Vec2 eigenvector(const Mat2& J, double lambda) {
    Vec2 a{J.xy, lambda - J.xx};
    Vec2 b{lambda - J.yy, J.yx};
    return unit(a.norm() >= b.norm() ? a : b);
}

// Displacement from the nearest periodic image of `s` to p.
Vec2 image_offset(Vec2 p, Vec2 s) {
    const Vec2 d = p - s;
    const double i = std::round((d.x + d.y) / kTwoPi);
    const double j = std::round((d.x - d.y) / kTwoPi);
    return {d.x - kPi * (i + j), d.y - kPi * (i - j)};
}

}  // namespace

ReducedSaddle find_reduced_saddle(const LatticeNode& node, const ForcingParams& params) {
    const ForcingParams p0{params.a, params.b, 0.0};
    Vec2 p = hamflow::saddle_at(node, p0).position;
    for (int it = 0; it < 50; ++it) {
        Vec2 v = inertial::reduced_field(p, params).vector;
        if (v.norm() < 1e-13) break;
        Mat2 J = inertial::reduced_jacobian(p, params);
        double det = J.det();
        p = p - Vec2{(J.yy * v.x - J.xy * v.y) / det, (-J.yx * v.x + J.xx * v.y) / det};
    }
    if (!(inertial::reduced_field(p, params).vector.norm() < 1e-11)) {
        fail(ErrorCode::NonConvergence, "find_reduced_saddle: Newton did not converge");
    }
    const Mat2 J = inertial::reduced_jacobian(p, params);
    const double tr = J.trace();
    const double disc = tr * tr - 4.0 * J.det();
    if (!(disc > 0.0) || !(J.det() < 0.0)) {
        fail(ErrorCode::TopologyError, "find_reduced_saddle: fixed point is not a saddle");
    }
    ReducedSaddle s;
    s.node = node;
    s.parity = node.parity();
    s.position = p;
    s.lambda_unstable = 0.5 * (tr + std::sqrt(disc));
    s.lambda_stable = 0.5 * (tr - std::sqrt(disc));
    s.e_unstable = eigenvector(J, s.lambda_unstable);
    s.e_stable = eigenvector(J, s.lambda_stable);
    return s;
}

Transversal::Transversal(const ForcingParams& params, const PoincareOptions& opts)
    : params_(params), opts_(opts), field_(inertial::PlanarField::reduced(params)) {
    params_.validate();
    saddles_[0] = find_reduced_saddle({-1, 0}, params_);
    saddles_[1] = find_reduced_saddle({0, 0}, params_);
    guard_.saddles = {saddles_[0].position, saddles_[1].position};
    guard_.radius = opts_.guard_radius;
}

double Transversal::normal_velocity(Vec2 p) const {
    return params_.b - params_.epsilon * params_.b * std::sin(p.x) * std::sin(p.y);
}

ReturnMapSample return_map_P(double z, const Transversal& tr) {
    const Vec2 start = section_point(z, 0);
    PlanarOptions o;
    o.rtol = tr.options().rtol;
    o.atol = tr.options().atol;
    o.guard = &tr.guard();
    const double t_cap = tr.options().map_time_factor / tr.params().b;
    EventTrace ev =
        inertial::integrate_planar(start, tr.field(), {kHalfPi}, t_cap, Direction::Forward, o);
    ReturnMapSample s;
    s.z_in = z;
    s.z_out = z_of(ev.final_state);
    s.winding = ev.winding;
    s.transit_time = ev.t_final;
    s.div_integral = ev.div_integral_final;
    s.vn_in = tr.normal_velocity(start);
    s.vn_out = tr.normal_velocity(ev.final_state);
    s.derivative = s.vn_in / s.vn_out * std::exp(s.div_integral);
    return s;
}

ReturnMapSample return_map_P(double z, const ForcingParams& params) {
    return return_map_P(z, Transversal(params));
}

int passage_side(double z, int j, const Transversal& tr) {
    const ReducedSaddle& S = tr.saddles()[static_cast<std::size_t>(j)];
    const double r_ball = 1e-3;
    const double det = cross(S.e_unstable, S.e_stable);
    using Y = ode::State<2>;
    const ForcingParams& params = tr.params();
    auto rhs = [&params](const Y& s, Y& d) {
        Vec2 v = inertial::reduced_field({s[0], s[1]}, params).vector;
        d[0] = v.x;
        d[1] = v.y;
    };
    ode::Options o;
    o.rtol = tr.options().rtol;
    o.atol = tr.options().atol;
    o.h_max = 0.1;
    const Vec2 start = section_point(z, 0);
    auto st = ode::make_dopri5<2>(rhs, 0.0, Y{start.x, start.y}, o);
    const double t_cap = tr.options().map_time_factor / params.b;
    bool inside = false;
    while (st.t() < t_cap) {
        st.step(t_cap);
        const Vec2 p{st.y()[0], st.y()[1]};
        const Vec2 d = image_offset(p, S.position);
        if (d.norm() < r_ball) {
            inside = true;
        } else if (inside) {
            // Coordinate along the unstable direction in the eigenbasis.
            const double alpha = cross(d, S.e_stable) / det;
            return alpha > 0.0 ? 1 : -1;
        }
        if (!inside && p.x >= kHalfPi) return 0;
    }
    return 0;
}

namespace {

struct ShotResult {
    bool reached = false;
    double z = 0.0;
    double t = 0.0;
};

ShotResult shoot(Vec2 start, double section, Direction dir, const Transversal& tr) {
    PlanarOptions o;
    o.rtol = tr.options().rtol;
    o.atol = tr.options().atol;
    o.h_max = 0.1;
    const double t_cap = tr.options().shoot_time_factor / tr.params().b;
    try {
        EventTrace ev = inertial::integrate_planar(start, tr.field(), {section}, t_cap, dir, o);
        return {true, z_of(ev.final_state), ev.t_final};
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoEvent) return {};
        throw;
    }
}

double refine_height(double z0, int j, const Transversal& tr) {
    double w = 1e-6;
    int s_lo = 0, s_hi = 0;
    for (; w < 1e-2; w *= 4.0) {
        s_lo = passage_side(z0 - w, j, tr);
        s_hi = passage_side(z0 + w, j, tr);
        if (s_lo != 0 && s_hi != 0 && s_lo != s_hi) break;
    }
    if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) {
        fail(ErrorCode::TopologyError,
             "locate_flat_spots: could not bracket the stable-manifold crossing");
    }
    double lo = z0 - w, hi = z0 + w;
    while (hi - lo > tr.options().bisection_width) {
        const double mid = 0.5 * (lo + hi);
        const int s = passage_side(mid, j, tr);
        if (s == 0) break;
        (s == s_lo ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

FlatSpotData locate_flat_spots(const Transversal& tr) {
    FlatSpotData out;
    const double off = tr.options().shoot_offset;
    for (std::size_t j = 0; j < 2; ++j) {
        const ReducedSaddle& S = tr.saddles()[j];
        out.saddle_refs[j] = S.node;

        ShotResult u1 = shoot(S.position + S.e_unstable * off, kHalfPi, Direction::Forward, tr);
        ShotResult u2 = shoot(S.position - S.e_unstable * off, kHalfPi, Direction::Forward, tr);
        if (tr.params().epsilon == 0.0) {
            // The loop is still closed: one branch returns to the saddle and
            // only the direct one defines the (degenerate) spot.
            if (!u1.reached && !u2.reached) {
                fail(ErrorCode::TopologyError, "locate_flat_spots: no unstable separatrix of saddle " +
                                                   std::to_string(j) + " reaches the section");
            }
            const double zd = !u2.reached || (u1.reached && u1.t <= u2.t) ? u1.z : u2.z;
            out.spots[j] = {zd, zd};
        } else {
            if (!u1.reached || !u2.reached) {
                fail(ErrorCode::TopologyError, "locate_flat_spots: unstable separatrix of saddle " +
                                                   std::to_string(j) + " missed the section");
            }
            out.spots[j] = {std::min(u1.z, u2.z), std::max(u1.z, u2.z)};
        }
        if (out.spots[j].length() > 0.5) {
            fail(ErrorCode::TopologyError, "locate_flat_spots: spot longer than half a turn");
        }

        ShotResult s1 = shoot(S.position + S.e_stable * off, -kHalfPi, Direction::Backward, tr);
        ShotResult s2 = shoot(S.position - S.e_stable * off, -kHalfPi, Direction::Backward, tr);
        if (!s1.reached && !s2.reached) {
            fail(ErrorCode::TopologyError, "locate_flat_spots: no stable separatrix of saddle " +
                                               std::to_string(j) + " reaches the section");
        }
        const ShotResult& free = !s2.reached || (s1.reached && s1.t <= s2.t) ? s1 : s2;
        out.shot_heights[j] = free.z;
        out.heights[j] = refine_height(free.z, static_cast<int>(j), tr);
    }
    return out;
}

FlatSpotData locate_flat_spots(const ForcingParams& params) {
    return locate_flat_spots(Transversal(params));
}

InverseMap::InverseMap(const Transversal& tr, FlatSpotData spots)
    : tr_(tr), spots_(spots) {}

int InverseMap::spot_index(double z) const {
    for (std::size_t j = 0; j < 2; ++j) {
        const Arc& I = spots_.spots[j];
        const double k = std::floor(z - I.lo);
        if (z - k <= I.hi) return static_cast<int>(j);
    }
    return -1;
}

InverseMap::BranchSample InverseMap::branch_sample(double r) const {
    const Vec2 start = section_point(r, 1);
    PlanarOptions o;
    o.rtol = tr_.options().rtol;
    o.atol = tr_.options().atol;
    const double t_cap = tr_.options().map_time_factor / tr_.params().b;
    try {
        EventTrace ev = inertial::integrate_planar(start, tr_.field(), {-kHalfPi}, t_cap,
                                                   Direction::Backward, o);
        // Inverse of the forward Liouville factor; the backward run accumulates -div.
        const double d = tr_.normal_velocity(start) / tr_.normal_velocity(ev.final_state) *
                         std::exp(ev.div_integral_final);
        return {z_of(ev.final_state), d};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoEvent) throw;
    }
    // Only points inside a spot fail to return; numerically this happens at
    // spot edges, where the limit value is the spot height.
    double best = std::numeric_limits<double>::infinity();
    double value = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
        const Arc& I = spots_.spots[j];
        const double k = std::round(r - 0.5 * (I.lo + I.hi));
        const double dist = std::max({I.lo + k - r, r - I.hi - k, 0.0});
        if (dist < best) {
            best = dist;
            value = spots_.heights[j] + k;
        }
    }
    return {value, 0.0};
}

double InverseMap::derivative(double z) const {
    if (spot_index(z) >= 0) return 0.0;
    return branch_sample(z - std::floor(z)).derivative;
}

double InverseMap::eval(double z) const {
    const double n = std::floor(z);
    const double r = z - n;
    for (std::size_t j = 0; j < 2; ++j) {
        const Arc& I = spots_.spots[j];
        const double k = std::floor(r - I.lo);
        if (r - k <= I.hi) return spots_.heights[j] + k + n;
    }
    return branch(r) + n;
}

double inverse_map_Q(double z, const Transversal& tr, const FlatSpotData& spots) {
    return InverseMap(tr, spots).eval(z);
}

DriftResult empirical_drift_slope(const inertial::PhaseState4& initial,
                                  const ForcingParams& params, double t_end, double sample_dt) {
    params.validate();
    if (!(params.epsilon > 0.0)) {
        fail(ErrorCode::DomainError, "empirical_drift_slope: requires epsilon > 0");
    }
    inertial::Mr4dOptions o;
    o.sample_dt = sample_dt;
    DriftResult r;
    r.samples = inertial::integrate_mr4d(initial, params, t_end, o);
    const auto& first = r.samples.front().s;
    const auto& last = r.samples.back().s;
    r.displacement = std::hypot(last.x - first.x, last.y - first.y);
    if (r.displacement < 10.0 * kPi) {
        fail(ErrorCode::UnboundedDetectionFailure,
             "empirical_drift_slope: displacement below ten cell widths; increase t_end");
    }
    const std::size_t i0 = r.samples.size() / 2;
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(r.samples.size() - i0);
    for (std::size_t i = i0; i < r.samples.size(); ++i) {
        mx += r.samples[i].s.x;
        my += r.samples[i].s.y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = i0; i < r.samples.size(); ++i) {
        const double dx = r.samples[i].s.x - mx;
        sxx += dx * dx;
        sxy += dx * (r.samples[i].s.y - my);
    }
    if (!(sxx > 0.0)) {
        fail(ErrorCode::UnboundedDetectionFailure, "empirical_drift_slope: no horizontal motion");
    }
    r.slope = sxy / sxx;
    return r;
}

}  // namespace cellflow::poincare
