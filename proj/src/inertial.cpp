#include "inertial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hamflow.hpp"

namespace cellflow::inertial {

PlanarField PlanarField::hamiltonian(const ForcingParams& params) {
    PlanarField f;
    f.kind_ = Kind::Hamiltonian;
    f.params_ = params;
    return f;
}

PlanarField PlanarField::reduced(const ForcingParams& params) {
    PlanarField f;
    f.kind_ = Kind::Reduced;
    f.params_ = params;
    return f;
}

PlanarField PlanarField::cellular() { return hamiltonian(ForcingParams{0.0, 0.0, 0.0}); }

PlanarField PlanarField::custom(Evaluator eval, const ForcingParams& params) {
    PlanarField f;
    f.kind_ = Kind::Custom;
    f.params_ = params;
    f.custom_ = std::move(eval);
    return f;
}

FieldSample PlanarField::eval(Vec2 p) const {
    FieldSample s;
    switch (kind_) {
        case Kind::Hamiltonian:
            s.v = hamflow::velocity(p, params_);
            s.jac = hamflow::velocity_jacobian(p, params_);
            s.div = 0.0;
            break;
        case Kind::Reduced: {
            ReducedSample r = reduced_field(p, params_);
            s.v = r.vector;
            s.div = r.divergence;
            s.jac = reduced_jacobian(p, params_);
            break;
        }
        case Kind::Custom:
            s = custom_(p);
            break;
    }
    s.v += offset_;
    return s;
}

Vec2 PlanarField::velocity(Vec2 p) const {
    switch (kind_) {
        case Kind::Hamiltonian: return hamflow::velocity(p, params_) + offset_;
        case Kind::Reduced: return reduced_field(p, params_).vector + offset_;
        case Kind::Custom: return custom_(p).v + offset_;
    }
    return {};
}

double PlanarField::divergence(Vec2 p) const {
    switch (kind_) {
        case Kind::Hamiltonian: return 0.0;
        case Kind::Reduced: return reduced_field(p, params_).divergence;
        case Kind::Custom: return custom_(p).div;
    }
    return 0.0;
}

PlanarField PlanarField::with_offset(Vec2 w) const {
    PlanarField f = *this;
    f.offset_ += w;
    return f;
}

Vec2 correction_f(Vec2 p, const ForcingParams& params) {
    const double a = params.a, b = params.b;
    const double sx = std::sin(p.x), cx = std::cos(p.x);
    const double sy = std::sin(p.y), cy = std::cos(p.y);
    return {sx * cx + a * cx * cy - b * sx * sy, sy * cy + a * sx * sy - b * cx * cy};
}

Mat2 correction_jacobian(Vec2 p, const ForcingParams& params) {
    const double a = params.a, b = params.b;
    const double sx = std::sin(p.x), cx = std::cos(p.x);
    const double sy = std::sin(p.y), cy = std::cos(p.y);
    const double cross1 = a * cx * sy + b * sx * cy;
    return {std::cos(2.0 * p.x) - a * sx * cy - b * cx * sy, -cross1, cross1,
            std::cos(2.0 * p.y) + a * sx * cy + b * cx * sy};
}

ReducedSample reduced_field(Vec2 p, const ForcingParams& params) {
    const double a = params.a, b = params.b, eps = params.epsilon;
    const double sx = std::sin(p.x), cx = std::cos(p.x);
    const double sy = std::sin(p.y), cy = std::cos(p.y);
    const Vec2 v{-cx * sy + b, sx * cy + a};
    const Vec2 f{sx * cx + a * cx * cy - b * sx * sy, sy * cy + a * sx * sy - b * cx * cy};
    // cos 2x + cos 2y = 2 (cx^2 - sy^2)
    return {v + eps * f, eps * 2.0 * (cx * cx - sy * sy)};
}

Mat2 reduced_jacobian(Vec2 p, const ForcingParams& params) {
    const Mat2 jv = hamflow::velocity_jacobian(p, params);
    const Mat2 jf = correction_jacobian(p, params);
    const double e = params.epsilon;
    return {jv.xx + e * jf.xx, jv.xy + e * jf.xy, jv.yx + e * jf.yx, jv.yy + e * jf.yy};
}

Embedding embed_external_force(const PlanarField& fluid_field, double mass,
                               double drag_coefficient, Vec2 gravity) {
    if (!(drag_coefficient > 0.0) || !std::isfinite(drag_coefficient)) {
        fail(ErrorCode::DomainError, "embed_external_force: drag coefficient must be positive");
    }
    if (!(mass >= 0.0) || !std::isfinite(mass)) {
        fail(ErrorCode::DomainError, "embed_external_force: mass must be non-negative");
    }
    const Vec2 w = gravity * (mass / drag_coefficient);
    return {fluid_field.with_offset(w), mass / drag_coefficient, w};
}

std::vector<TimedState4> integrate_mr4d(const PhaseState4& initial, const PlanarField& field,
                                        double epsilon, double t_end, const Mr4dOptions& opts) {
    if (!(epsilon >= kMinEpsilon)) {
        fail(ErrorCode::DomainError,
             "integrate_mr4d: epsilon must be at least " + std::to_string(kMinEpsilon));
    }
    if (!(t_end >= 0.0)) fail(ErrorCode::DomainError, "integrate_mr4d: t_end must be >= 0");
    using Y = ode::State<4>;
    const double inv_eps = 1.0 / epsilon;
    auto rhs = [&field, inv_eps](const Y& s, Y& d) {
        Vec2 v = field.velocity({s[0], s[1]});
        d[0] = s[2];
        d[1] = s[3];
        d[2] = -(s[2] - v.x) * inv_eps;
        d[3] = -(s[3] - v.y) * inv_eps;
    };
    ode::Options o;
    o.rtol = opts.rtol;
    o.atol = opts.atol;
    Y y0{initial.x, initial.y, initial.vx, initial.vy};
    auto st = ode::make_dopri5<4>(rhs, 0.0, y0, o);

    std::vector<TimedState4> out;
    out.push_back({0.0, initial});
    double next_sample = opts.sample_dt;
    while (st.t() < t_end) {
        st.step(t_end);
        if (opts.sample_dt > 0.0) {
            while (next_sample <= st.t() + 1e-12 * std::max(1.0, t_end)) {
                Y s = next_sample >= st.t() ? st.y() : st.dense(next_sample);
                out.push_back({next_sample, {s[0], s[1], s[2], s[3]}});
                next_sample = opts.sample_dt * static_cast<double>(out.size());
            }
        } else {
            const Y& s = st.y();
            out.push_back({st.t(), {s[0], s[1], s[2], s[3]}});
        }
    }
    return out;
}

std::vector<TimedState4> integrate_mr4d(const PhaseState4& initial, const ForcingParams& params,
                                        double t_end, const Mr4dOptions& opts) {
    params.validate();
    return integrate_mr4d(initial, PlanarField::hamiltonian(params), params.epsilon, t_end, opts);
}

double SaddleGuard::distance(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& s : saddles) {
        // Images form the lattice i (pi, pi) + j (pi, -pi), a square lattice in
        // the rotated coordinates u = x + y, w = x - y.
        const Vec2 d = p - s;
        const double i = std::round((d.x + d.y) / kTwoPi);
        const double j = std::round((d.x - d.y) / kTwoPi);
        const Vec2 img{d.x - kPi * (i + j), d.y - kPi * (i - j)};
        best = std::min(best, img.norm());
    }
    return best;
}

EventTrace integrate_planar(Vec2 initial, const PlanarField& field,
                            const std::vector<double>& sections, double t_end,
                            Direction direction, const PlanarOptions& opts) {
    using Y = ode::State<3>;
    const double sign = direction == Direction::Forward ? 1.0 : -1.0;
    auto rhs = [&field, sign](const Y& s, Y& d) {
        const Vec2 p{s[0], s[1]};
        Vec2 v;
        double div = 0.0;
        if (field.kind() == PlanarField::Kind::Reduced) {
            ReducedSample r = reduced_field(p, field.params());
            v = r.vector + field.offset();
            div = r.divergence;
        } else if (field.kind() == PlanarField::Kind::Hamiltonian) {
            v = field.velocity(p);
        } else {
            FieldSample fs = field.eval(p);
            v = fs.v;
            div = fs.div;
        }
        d[0] = sign * v.x;
        d[1] = sign * v.y;
        d[2] = sign * div;
    };
    ode::Options o;
    o.rtol = opts.rtol;
    o.atol = opts.atol;
    o.h_max = opts.h_max;
    auto st = ode::make_dopri5<3>(rhs, 0.0, Y{initial.x, initial.y, 0.0}, o);

    EventTrace trace;
    if (opts.record_path) trace.path.push_back(initial);

    struct Hit {
        double t;
        Y state;
        int idx;
        int dir;
    };
    std::vector<Hit> hits;
    std::size_t crossings = 0;
    while (st.t() < t_end) {
        st.step(t_end);
        const Y& yp = st.y_prev();
        const Y& yc = st.y();
        if (!std::isfinite(yc[0]) || !std::isfinite(yc[1])) {
            fail(ErrorCode::StepFailure, "integrate_planar: non-finite state");
        }
        hits.clear();
        for (std::size_t k = 0; k < sections.size(); ++k) {
            const double g0 = yp[0] - sections[k];
            const double g1 = yc[0] - sections[k];
            if ((g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0)) {
                Hit h;
                h.idx = static_cast<int>(k);
                h.dir = g1 > g0 ? 1 : -1;
                h.t = ode::locate_crossing(st, 0, sections[k], h.state);
                h.state[0] = sections[k];
                hits.push_back(h);
            }
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& l, const Hit& r) { return l.t < r.t; });
        for (const Hit& h : hits) {
            trace.times.push_back(h.t);
            trace.states.push_back({h.state[0], h.state[1]});
            trace.div_integrals.push_back(h.state[2]);
            trace.section_index.push_back(h.idx);
            trace.winding += h.dir * static_cast<int>(sign);
            ++crossings;
            if (opts.stop_after != 0 && crossings >= opts.stop_after) {
                trace.t_final = h.t;
                trace.final_state = {h.state[0], h.state[1]};
                trace.div_integral_final = h.state[2];
                if (opts.record_path) trace.path.push_back(trace.final_state);
                return trace;
            }
        }
        if (opts.record_path) trace.path.push_back({yc[0], yc[1]});
        if (opts.guard != nullptr && opts.guard->distance({yc[0], yc[1]}) < opts.guard->radius) {
            fail(ErrorCode::SeparatrixHit, "integrate_planar: trajectory entered a saddle ball");
        }
    }
    trace.t_final = st.t();
    trace.final_state = {st.y()[0], st.y()[1]};
    trace.div_integral_final = st.y()[2];
    if (opts.stop_after != 0) {
        fail(ErrorCode::NoEvent, "integrate_planar: no section crossing before t_end=" +
                                     std::to_string(t_end));
    }
    return trace;
}

CellInfo cell_info(const ForcingParams& params) {
    params.validate();
    const ForcingParams p0{params.a, params.b, 0.0};
    Vec2 c{-params.a, params.b};
    for (int it = 0; it < 50; ++it) {
        Vec2 v = hamflow::velocity(c, p0);
        if (v.norm() < 1e-14) break;
        Mat2 J = hamflow::velocity_jacobian(c, p0);
        double det = J.det();
        c = c - Vec2{(J.yy * v.x - J.xy * v.y) / det, (-J.yx * v.x + J.xx * v.y) / det};
    }
    if (!(hamflow::velocity(c, p0).norm() < 1e-10)) {
        fail(ErrorCode::NonConvergence, "cell_info: center Newton failed");
    }
    hamflow::SaddlePoint s = hamflow::saddle_at({-1, 0}, p0);
    return {c, hamflow::hamiltonian(c, p0), s.h_value, s.position};
}

AreaCheck divergence_area_check(double level, const ForcingParams& params) {
    const ForcingParams p0{params.a, params.b, 0.0};
    const CellInfo cell = cell_info(params);
    if (!(level > cell.h_saddle && level < cell.h_center)) {
        fail(ErrorCode::NotClosed, "divergence_area_check: level outside the closed-orbit range");
    }
    Vec2 d = cell.center - cell.saddle;
    d = d * (1.0 / d.norm());

    // Along the ray away from the loop saddle H decreases from the center value.
    auto H = [&](double r) { return hamflow::hamiltonian(cell.center + d * r, p0) - level; };
    const double r_max = kPi;
    const double dr = 1e-3;
    double r_lo = 0.0, r_hi = -1.0;
    for (double r = dr; r <= r_max; r += dr) {
        if (H(r) <= 0.0) {
            r_hi = r;
            break;
        }
        r_lo = r;
    }
    if (r_hi < 0.0) fail(ErrorCode::NotClosed, "divergence_area_check: level not met on ray");
    for (int it = 0; it < 200 && r_hi - r_lo > 1e-15; ++it) {
        double mid = 0.5 * (r_lo + r_hi);
        (H(mid) > 0.0 ? r_lo : r_hi) = mid;
    }
    const Vec2 start = cell.center + d * (0.5 * (r_lo + r_hi));

    using Y = ode::State<4>;
    const Vec2 c = cell.center;
    const double s2cx = std::sin(2.0 * c.x), s2cy = std::sin(2.0 * c.y);
    auto rhs = [&p0, c, s2cx, s2cy](const Y& s, Y& out) {
        Vec2 v = hamflow::velocity({s[0], s[1]}, p0);
        out[0] = v.x;
        out[1] = v.y;
        out[2] = (s[0] - c.x) * v.y;
        out[3] = 0.5 * (std::sin(2.0 * s[0]) - s2cx) * v.y -
                 0.5 * (std::sin(2.0 * s[1]) - s2cy) * v.x;
    };
    ode::Options o;
    o.rtol = 1e-11;
    o.atol = 1e-13;
    o.h_max = 0.05;
    auto st = ode::make_dopri5<4>(rhs, 0.0, Y{start.x, start.y, 0.0, 0.0}, o);
    auto g = [&](const Y& s) { return cross(d, Vec2{s[0], s[1]} - c); };
    const double orient = cross(d, hamflow::velocity(start, p0)) > 0.0 ? 1.0 : -1.0;
    const double t_cap = 1000.0;
    while (st.t() < t_cap) {
        st.step(t_cap);
        const double g0 = orient * g(st.y_prev());
        const double g1 = orient * g(st.y());
        const Y& yc = st.y();
        if (std::abs(yc[0] - c.x) > kPi || std::abs(yc[1] - c.y) > kPi) {
            fail(ErrorCode::NotClosed, "divergence_area_check: orbit left the cell");
        }
        if (st.t_prev() > 0.0 && g0 < 0.0 && g1 >= 0.0 &&
            dot(d, Vec2{yc[0], yc[1]} - c) > 0.0) {
            double lo = st.t_prev(), hi = st.t();
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                double mid = 0.5 * (lo + hi);
                (orient * g(st.exact_from_prev(mid)) < 0.0 ? lo : hi) = mid;
            }
            const double t_end = 0.5 * (lo + hi);
            const Y end = st.exact_from_prev(t_end);
            if ((Vec2{end[0], end[1]} - start).norm() > 1e-6) {
                fail(ErrorCode::NotClosed, "divergence_area_check: orbit did not close");
            }
            const double sgn = end[2] >= 0.0 ? 1.0 : -1.0;
            return {sgn * end[3], std::abs(end[2]), t_end, c, start};
        }
    }
    fail(ErrorCode::NotClosed, "divergence_area_check: no return within the time cap");
}

}  // namespace cellflow::inertial
