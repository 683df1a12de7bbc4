#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace cellflow::circlemap {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

struct Rational {
    std::int64_t p = 0;
    std::int64_t q = 1;

    static Rational reduced(std::int64_t p, std::int64_t q);
    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    bool operator==(const Rational&) const = default;
};

bool operator<(const Rational& l, const Rational& r);

/// Lift of a monotone degree-one circle map that is constant on each spot.
///
/// Spots are closed arcs given by lifts [lo, hi] with hi - lo < 1; the map
/// equals heights[j] + k on spots[j] + k. Off the spots the lift is given by
/// `branch`, which must be defined on the whole line (its values inside the
/// spots are ignored).
class FlatSpotCircleMap {
public:
    using Branch = std::function<double(double)>;

    FlatSpotCircleMap(std::vector<Interval> spots, std::vector<double> heights, Branch branch,
                      Branch derivative = {}, std::int64_t lift_offset = 0);

    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    /// Derivative of the branch at x, or 0 on a spot. Requires a derivative.
    double derivative(double x) const;
    bool has_derivative() const { return static_cast<bool>(derivative_); }

    /// Index of the spot containing x mod 1, or -1. With shrink > 0 the
    /// spots are shrunk by that amount at both ends first.
    int spot_index(double x, double shrink = 0.0) const;

    /// Integer k with x in spots[j] + k shrunk by `shrink`, if any.
    std::optional<std::int64_t> spot_shift(double x, std::size_t j, double shrink) const;

    std::size_t m() const { return spots_.size(); }
    const std::vector<Interval>& spots() const { return spots_; }
    const std::vector<double>& heights() const { return heights_; }
    std::int64_t lift_offset() const { return lift_offset_; }

private:
    std::vector<Interval> spots_;
    std::vector<double> heights_;
    Branch branch_;
    Branch derivative_;
    std::int64_t lift_offset_ = 0;
};

using MapPtr = std::shared_ptr<const FlatSpotCircleMap>;

/// Thread-safe memo of height orbits keyed by (s, spot index).
class OrbitCache {
public:
    std::vector<double> get(double s, std::size_t j) const;
    void put(double s, std::size_t j, std::vector<double> orbit);
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<std::pair<double, std::size_t>, std::vector<double>> orbits_;
};

/// One-parameter family s -> f_s of flat-spot maps, non-decreasing in s.
struct MonotoneFamily {
    std::function<MapPtr(double)> generator;
    Interval s_range;
    double nu = 0.0;      // lower bound on the speed of the heights in s
    double lambda = 1.0;  // expansion off the spots
    std::size_t m = 1;    // number of spots
    std::shared_ptr<OrbitCache> cache;  // optional

    MapPtr at(double s) const { return generator(s); }
};

/// g = 0 on [0, flat_fraction], slope (x - flat_fraction) after, f_s = g + s
/// for s in [0, 1]. Requires slope (1 - flat_fraction) = 1 and slope > 1.
MonotoneFamily make_boyd_family(double flat_fraction, double slope);

struct RotationOptions {
    int q_max = 200;
    std::int64_t n_max = 100000;
    double spot_tol = 1e-12;
    bool use_certificate = true;
};

struct RotationResult {
    enum class Kind { Rational, Interval };
    Kind kind = Kind::Interval;
    Rational rho;                // valid for Rational
    int certificate_spot = -1;   // spot whose orbit returned
    double lo = 0.0, hi = 0.0;   // equal to rho for Rational
    std::int64_t iterations = 0;

    bool is_rational() const { return kind == Kind::Rational; }
    double value() const { return 0.5 * (lo + hi); }
};

/// Rotation number with a periodic-orbit certificate when a spot returns
/// strictly inside itself (shifted by p) after q <= q_max steps, otherwise
/// the interval [floor(d)/n, ceil(d)/n] from n_max iterates of a height.
RotationResult rotation_number(const FlatSpotCircleMap& map, const RotationOptions& opts = {});

/// Same, using and filling the family's orbit cache.
RotationResult rotation_at(const MonotoneFamily& family, double s,
                           const RotationOptions& opts = {});

/// Brute-force estimate (f^n(x0) - x0) / n.
double rotation_brute_force(const FlatSpotCircleMap& map, double x0, std::int64_t n);

struct PlateauOptions {
    RotationOptions rotation;
    double width = 1e-12;      // final bisection width
    double search_res = 1e-6;  // NotFound below this bracket width
};

/// Closed interval of s where rho(s) = p/q, by bisection on the certificate.
/// Throws NotFound when no certified s exists in `bracket`.
Interval plateau_bounds(const MonotoneFamily& family, std::int64_t p, std::int64_t q,
                        Interval bracket, const PlateauOptions& opts = {});

/// Sum over spots of f_s^{N-1}(height_j).
double psi_N(const MonotoneFamily& family, double s, int N);

struct Plateau {
    Rational rho;
    Interval s;
};

struct CoverResult {
    int N = 0;
    std::vector<Plateau> plateaus;
    std::vector<Rational> empty;          // rationals with no certified plateau
    std::vector<Interval> c_n_intervals;  // complement of the plateaus in s_range
    std::map<double, double> m_d;         // d -> sum |I|^d over c_n_intervals
    double diam = 0.0;
};

/// Plateaus of every p/q with q <= m N inside s_range and their complement.
CoverResult cover_CN(const MonotoneFamily& family, int N, const PlateauOptions& opts = {},
                     const std::vector<double>& ds = {1.0, 0.5, 0.2, 0.1});

enum class Side { Left, Right };

struct SteepnessPoint {
    double delta_s = 0.0;
    double delta_rho = 0.0;
    double c = 0.0;      // delta_rho |ln delta_s|
    double bound = 0.0;  // D / (q |ln delta_s|)
    bool bound_ok = false;
};

struct SteepnessResult {
    Rational rho;
    double endpoint = 0.0;
    double D = 0.0;          // ln(lambda) / (4 m)
    double fitted_c = 0.0;   // least squares of delta_rho against 1/|ln delta_s|
    std::vector<SteepnessPoint> points;
};

SteepnessResult steepness_scan(const MonotoneFamily& family, Interval plateau, Side side,
                               const std::vector<double>& deltas,
                               const RotationOptions& opts = {});

struct HausdorffRow {
    double d = 0.0;
    int N = 0;
    double m_d = 0.0;
};

struct HausdorffResult {
    std::vector<HausdorffRow> rows;
    std::map<double, double> slope;  // d -> least-squares slope of ln m_d against N
    std::vector<CoverResult> covers;
};

HausdorffResult hausdorff_estimate(const MonotoneFamily& family, int N_max,
                                   const PlateauOptions& opts = {},
                                   const std::vector<double>& ds = {1.0, 0.5, 0.2, 0.1});

/// All reduced p/q with 1 <= q <= q_max and lo <= p/q <= hi, ascending.
std::vector<Rational> farey_between(double lo, double hi, std::int64_t q_max);

}  // namespace cellflow::circlemap
