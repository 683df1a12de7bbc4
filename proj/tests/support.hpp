#pragma once

// Shared helpers for the test binaries: seeded generators, a small property
// runner, and integrators that do not share code with the library.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace testsupport {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Draws `cases` inputs from `gen` and checks `prop` on each. On the first
/// failure the case index and a description of the input are reported.
template <class T>
void for_all(int cases, std::uint64_t seed, const std::function<T(Gen&)>& gen,
             const std::function<bool(const T&)>& prop,
             const std::function<std::string(const T&)>& show) {
    Gen g(seed);
    for (int i = 0; i < cases; ++i) {
        T input = gen(g);
        if (!prop(input)) {
            FAIL("property failed at case " << i << " (seed " << seed << "): " << show(input));
            return;
        }
    }
}

inline std::string show_pair(double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << a << ", " << b << ")";
    return os.str();
}

/// Classical fixed-step RK4 on R^N.
template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N, class F>
Vec<N> rk4_step(const F& f, const Vec<N>& y, double h) {
    auto axpy = [](const Vec<N>& a, const Vec<N>& b, double s) {
        Vec<N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    const Vec<N> k1 = f(y);
    const Vec<N> k2 = f(axpy(y, k1, h / 2));
    const Vec<N> k3 = f(axpy(y, k2, h / 2));
    const Vec<N> k4 = f(axpy(y, k3, h));
    Vec<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return r;
}

/// Forced cellular flow written out independently of the library.
struct CellFlow {
    double a, b;
    double H(double x, double y) const { return std::cos(x) * std::cos(y) - a * x + b * y; }
    Vec<2> v(const Vec<2>& p) const {
        return {-std::cos(p[0]) * std::sin(p[1]) + b, std::sin(p[0]) * std::cos(p[1]) + a};
    }
};

/// Central difference of a scalar function.
template <class F>
double central_diff(const F& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

/// Solves g(y) = 0 on [lo, hi] by bisection; g must change sign.
template <class G>
double bisect(const G& g, double lo, double hi, int iters = 200) {
    double glo = g(lo);
    for (int i = 0; i < iters && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace testsupport
