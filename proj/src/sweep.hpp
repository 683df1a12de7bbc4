#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circlemap.hpp"
#include "poincare.hpp"

namespace cellflow::sweep {

using circlemap::Interval;
using circlemap::Rational;
using circlemap::RotationResult;

struct FamilyOptions {
    poincare::PoincareOptions poincare;
};

/// Flat-spot circle map of the inverse return map at forcing (a, b, eps).
circlemap::MapPtr dynamics_map(const ForcingParams& params, const FamilyOptions& opts = {});

/// The family s -> Q_s with a = -s at fixed b and epsilon, over s_range.
/// nu and lambda are left at their defaults; see estimate_family_constants.
circlemap::MonotoneFamily make_dynamics_family(double b, double epsilon, Interval s_range,
                                               const FamilyOptions& opts = {});

struct FamilyConstants {
    double lambda = 0.0;  // min dQ/dz off the spots
    double nu = 0.0;      // min finite-difference slope of the heights in s
};

/// Empirical expansion and height-speed constants of the dynamics family at
/// the given parameter values.
FamilyConstants estimate_family_constants(double b, double epsilon,
                                          const std::vector<double>& s_values,
                                          int z_samples = 64, const FamilyOptions& opts = {});

/// Drift slope m = 1 - 2 rho for a rational rotation number.
Rational drift_slope_of(const Rational& rho);
/// Rotation number (1 - m) / 2 for a rational drift slope.
Rational rotation_of_slope(const Rational& m);

struct StaircaseRow {
    double alpha = 0.0;
    double s = 0.0;
    std::optional<RotationResult> rotation;  // empty on error rows
    double m = 0.0;                          // 1 - 2 rho (interval midpoint)
    double m_lo = 0.0, m_hi = 0.0;
    std::string status = "ok";
};

struct SlopePlateau {
    Rational m;
    Interval alpha;
};

struct StaircaseOptions {
    circlemap::RotationOptions rotation{200, 2000, 1e-12, true};
    int q_cap = 12;
    double plateau_width = 1e-10;
    bool refine_plateaus = true;
    unsigned threads = 0;
    FamilyOptions family;
};

struct StaircaseTable {
    double b = 0.0;
    double epsilon = 0.0;
    Interval alpha_range;
    int resolution = 0;
    int q_cap = 0;
    std::vector<StaircaseRow> rows;
    std::vector<SlopePlateau> plateaus;  // refined, clipped to alpha_range, ascending

    /// Fraction of alpha_range covered by plateaus whose slope denominator is
    /// at most q_max.
    double coverage(std::int64_t q_max) const;
    /// Largest decrease of m between consecutive rows (0 if non-decreasing).
    double max_decrease() const;
};

/// Evenly spaced alpha samples (both ends included).
std::vector<double> linspace(double lo, double hi, int count);

StaircaseTable staircase_sweep(double b, double epsilon, Interval alpha_range, int resolution,
                               const StaircaseOptions& opts = {});

struct TongueCell {
    double alpha = 0.0;
    double epsilon = 0.0;
    std::optional<RotationResult> rotation;
    std::optional<Rational> m;  // certified drift slope
    std::string status = "ok";
};

struct TongueSlice {
    double epsilon = 0.0;
    std::optional<Interval> alpha;  // empty when the tongue is not met at this epsilon
};

struct TongueRegion {
    Rational target;  // drift slope
    std::vector<TongueSlice> slices;
    double area = 0.0;  // trapezoid rule over epsilon of the widths
};

struct TongueScan {
    double b = 0.0;
    Interval alpha_range;
    Interval epsilon_range;
    int n_alpha = 0;
    int n_epsilon = 0;
    std::vector<TongueCell> cells;  // epsilon-major
    std::vector<TongueRegion> tongues;
};

struct TongueOptions {
    circlemap::RotationOptions rotation{200, 2000, 1e-12, true};
    double boundary_width = 1e-8;
    unsigned threads = 0;
    FamilyOptions family;
};

/// Classifies the drift slope on an n_alpha x n_epsilon grid and traces the
/// alpha-extent of each target tongue at every grid epsilon by bisection.
TongueScan tongue_scan(double b, Interval alpha_range, Interval epsilon_range,
                       const std::vector<Rational>& targets, int n_alpha, int n_epsilon,
                       const TongueOptions& opts = {});

}  // namespace cellflow::sweep
