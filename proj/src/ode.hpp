#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "errors.hpp"

namespace cellflow::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  // 0 selects an automatic initial step
    double h_max = std::numeric_limits<double>::infinity();
    double h_min = 1e-14;
    std::size_t max_steps = 50'000'000;
};

/// Dormand-Prince 5(4) stepper with the 4th-order continuous extension.
///
/// The right-hand side is any callable `void(const State<N>&, State<N>&)`;
/// the systems integrated here are autonomous, so time is bookkeeping only.
/// After each call to step() the dense output covers [t_prev(), t()].
template <std::size_t N, class Rhs>
class Dopri5 {
public:
    using Y = State<N>;

    Dopri5(Rhs rhs, double t0, const Y& y0, const Options& opts)
        : rhs_(std::move(rhs)), opts_(opts), t_(t0), t_prev_(t0), y_(y0), y_prev_(y0) {
        rhs_(y_, k1_);
        h_ = opts_.h_init > 0.0 ? opts_.h_init : initial_step();
        h_ = std::min(h_, opts_.h_max);
    }

    double t() const { return t_; }
    double t_prev() const { return t_prev_; }
    const Y& y() const { return y_; }
    const Y& y_prev() const { return y_prev_; }
    const Y& dydt() const { return k1_; }
    double last_step() const { return t_ - t_prev_; }
    std::size_t steps() const { return n_steps_; }

    void set_h_max(double h_max) {
        opts_.h_max = h_max;
        h_ = std::min(h_, h_max);
    }

    /// Advances by one accepted step, never beyond t_stop.
    void step(double t_stop = std::numeric_limits<double>::infinity()) {
        if (++n_steps_ > opts_.max_steps) {
            fail(ErrorCode::StepFailure, "ode: step budget exhausted");
        }
        bool clipped = false;
        for (;;) {
            double h = h_;
            if (t_ + h >= t_stop) {
                h = t_stop - t_;
                clipped = true;
            }
            if (h < opts_.h_min) {
                if (clipped && h > 0.0) {
                    // Tail shorter than h_min: take it without error control.
                    Y y_new;
                    Y k7;
                    raw_step(y_, k1_, h, y_new, k7);
                    accept(h, y_new, k7);
                    return;
                }
                fail(ErrorCode::StepFailure,
                     "ode: step size underflow (h=" + std::to_string(h) + ")");
            }
            Y y_new;
            Y k7;
            double err = raw_step(y_, k1_, h, y_new, k7);
            if (!std::isfinite(err)) err = 1e10;
            if (err <= 1.0) {
                accept(h, y_new, k7);
                double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                fac = std::clamp(fac, 0.2, 5.0);
                if (reject_streak_ > 0) fac = std::min(fac, 1.0);
                reject_streak_ = 0;
                if (!clipped || h >= h_) h_ = std::min(h * fac, opts_.h_max);
                return;
            }
            ++reject_streak_;
            double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            h_ = h * fac;
            clipped = false;
        }
    }

    /// Dense output on [t_prev(), t()].
    Y dense(double t) const {
        const double h = t_ - t_prev_;
        if (h == 0.0) return y_;
        const double th = (t - t_prev_) / h;
        const double th1 = 1.0 - th;
        Y out;
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = r1_[i] + th * (r2_[i] + th1 * (r3_[i] + th * (r4_[i] + th1 * r5_[i])));
        }
        return out;
    }

    /// One unchecked RK step from (t_prev, y_prev) to t within the last step.
    /// Full 5th-order accuracy, used to polish event locations.
    Y exact_from_prev(double t) const {
        const double h = t - t_prev_;
        if (h == 0.0) return y_prev_;
        Y k1;
        rhs_(y_prev_, k1);
        Y y_new;
        Y k7;
        raw_step(y_prev_, k1, h, y_new, k7);
        return y_new;
    }

    void eval_rhs(const Y& y, Y& out) const { rhs_(y, out); }

private:
    double raw_step(const Y& y, const Y& k1, double h, Y& y_new, Y& k7) const {
        constexpr double a21 = 1.0 / 5.0;
        constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                         a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
        constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                         a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
        constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                         a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
        constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                         e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
        constexpr double d1 = -12715105075.0 / 11282082432.0,
                         d3 = 87487479700.0 / 32700410799.0,
                         d4 = -10690763975.0 / 1880347072.0,
                         d5 = 701980252875.0 / 199316789632.0,
                         d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

        Y k2, k3, k4, k5, k6, tmp;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        rhs_(tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs_(tmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs_(tmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs_(tmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] +
                     h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs_(tmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                   a76 * k6[i]);
        rhs_(y_new, k7);

        double err2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            double sc = opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err2 += (e / sc) * (e / sc);
            pending_r5_[i] =
                h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        return std::sqrt(err2 / static_cast<double>(N));
    }

    void accept(double h, const Y& y_new, const Y& k7) {
        for (std::size_t i = 0; i < N; ++i) {
            double ydiff = y_new[i] - y_[i];
            double bspl = h * k1_[i] - ydiff;
            r1_[i] = y_[i];
            r2_[i] = ydiff;
            r3_[i] = bspl;
            r4_[i] = ydiff - h * k7[i] - bspl;
            r5_[i] = pending_r5_[i];
        }
        y_prev_ = y_;
        t_prev_ = t_;
        y_ = y_new;
        k1_ = k7;
        t_ = t_prev_ + h;
    }

    double initial_step() const {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double sc = opts_.atol + opts_.rtol * std::abs(y_[i]);
            d0 += (y_[i] / sc) * (y_[i] / sc);
            d1 += (k1_[i] / sc) * (k1_[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        Y y1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y_[i] + h0 * k1_[i];
        Y f1;
        rhs_(y1, f1);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double sc = opts_.atol + opts_.rtol * std::abs(y_[i]);
            d2 += ((f1[i] - k1_[i]) / sc) * ((f1[i] - k1_[i]) / sc);
        }
        d2 = std::sqrt(d2 / N) / h0;
        double dm = std::max(d1, d2);
        double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        return std::min(100.0 * h0, h1);
    }

    Rhs rhs_;
    Options opts_;
    double t_, t_prev_;
    double h_ = 0.0;
    Y y_, y_prev_;
    Y k1_{};
    Y r1_{}, r2_{}, r3_{}, r4_{}, r5_{};
    mutable Y pending_r5_{};
    std::size_t n_steps_ = 0;
    int reject_streak_ = 0;
};

template <std::size_t N, class Rhs>
Dopri5<N, Rhs> make_dopri5(Rhs rhs, double t0, const State<N>& y0, const Options& opts) {
    return Dopri5<N, Rhs>(std::move(rhs), t0, y0, opts);
}

/// Locates the time in [t_prev, t] where component `comp` of the solution
/// equals `level`, given that it brackets a sign change. Bisection on the
/// dense output, then Newton polishing with exact steps from t_prev.
/// Returns the event time; `out` receives the polished state.
template <std::size_t N, class Rhs>
double locate_crossing(const Dopri5<N, Rhs>& st, std::size_t comp, double level,
                       State<N>& out, double tol = 1e-12) {
    double lo = st.t_prev();
    double hi = st.t();
    double g_lo = st.y_prev()[comp] - level;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        double g = st.dense(mid)[comp] - level;
        if (std::abs(g) < 0.1 * tol) {
            lo = hi = mid;
            break;
        }
        if ((g < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    double t = 0.5 * (lo + hi);
    out = st.exact_from_prev(t);
    for (int it = 0; it < 4; ++it) {
        double g = out[comp] - level;
        if (std::abs(g) < 0.1 * tol) break;
        State<N> d;
        st.eval_rhs(out, d);
        if (d[comp] == 0.0) break;
        t -= g / d[comp];
        out = st.exact_from_prev(t);
    }
    return t;
}

}  // namespace cellflow::ode
