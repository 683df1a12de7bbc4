#pragma once

#include <array>
#include <vector>

#include "hamflow.hpp"
#include "inertial.hpp"
#include "types.hpp"

namespace cellflow::poincare {

/// Circle coordinate z = (y - x) / (2 pi) on the sections x = pi k - pi/2.
inline double z_of(Vec2 p) { return (p.y - p.x) / kTwoPi; }

/// Point on the section x = pi k - pi/2 with coordinate z.
inline Vec2 section_point(double z, int k) {
    const double x = kPi * k - kHalfPi;
    return {x, x + kTwoPi * z};
}

struct PoincareOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double guard_radius = 1e-5;
    double shoot_offset = 1e-6;
    double bisection_width = 1e-10;
    // Multiplies 1/b for the separatrix shooting time cap.
    double shoot_time_factor = 10.0;
    // Multiplies 1/b for ordinary map evaluations.
    double map_time_factor = 200.0;
};

/// Saddle of the reduced field with its eigen-directions.
struct ReducedSaddle {
    hamflow::LatticeNode node;
    hamflow::Parity parity = hamflow::Parity::Odd;
    Vec2 position;
    Vec2 e_unstable;
    Vec2 e_stable;
    double lambda_unstable = 0.0;
    double lambda_stable = 0.0;
};

/// Newton on v + eps f seeded at the Hamiltonian saddle of `node`.
ReducedSaddle find_reduced_saddle(const hamflow::LatticeNode& node, const ForcingParams& params);

struct ReturnMapSample {
    double z_in = 0.0;
    double z_out = 0.0;
    int winding = 0;
    double derivative = 0.0;  // Liouville formula
    double transit_time = 0.0;
    double div_integral = 0.0;
    double vn_in = 0.0;
    double vn_out = 0.0;
};

/// Immutable per-parameter state shared by the map evaluations: the two
/// reduced saddles of the strip -pi/2 < x < pi/2 (left one near the node
/// (-pi/2, pi/2), right one near (pi/2, pi/2)) and the saddle guard.
class Transversal {
public:
    explicit Transversal(const ForcingParams& params, const PoincareOptions& opts = {});

    const ForcingParams& params() const { return params_; }
    const PoincareOptions& options() const { return opts_; }
    const std::array<ReducedSaddle, 2>& saddles() const { return saddles_; }
    const inertial::SaddleGuard& guard() const { return guard_; }
    const inertial::PlanarField& field() const { return field_; }

    /// Normal velocity component on a section, b - eps b sin x sin y.
    double normal_velocity(Vec2 p) const;

private:
    ForcingParams params_;
    PoincareOptions opts_;
    std::array<ReducedSaddle, 2> saddles_;
    inertial::SaddleGuard guard_;
    inertial::PlanarField field_;
};

/// First return from x = -pi/2 to x = pi/2, as a lift in z.
ReturnMapSample return_map_P(double z, const Transversal& tr);
ReturnMapSample return_map_P(double z, const ForcingParams& params);

struct Arc {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double z) const { return z >= lo && z <= hi; }
};

struct FlatSpotData {
    std::array<Arc, 2> spots;       // on x = pi/2, z-lifts
    std::array<double, 2> heights;  // on x = -pi/2, z-lifts
    std::array<hamflow::LatticeNode, 2> saddle_refs;
    std::array<double, 2> shot_heights;  // before the bisection refinement
};

/// Flat spots of the inverse map and their heights, by separatrix shooting.
/// Throws TopologyError when the shot separatrices do not behave as in the
/// small-forcing regime.
FlatSpotData locate_flat_spots(const Transversal& tr);
FlatSpotData locate_flat_spots(const ForcingParams& params);

/// Side (+1 / -1) of the stable manifold of saddle j on which the forward
/// trajectory from left-section coordinate z passes.
int passage_side(double z, int j, const Transversal& tr);

/// Inverse-time return map from x = pi/2 to x = -pi/2 extended by the flat
/// spots. Degree one: Q(z + 1) = Q(z) + 1 exactly.
class InverseMap {
public:
    InverseMap(const Transversal& tr, FlatSpotData spots);

    double operator()(double z) const { return eval(z); }
    double eval(double z) const;

    struct BranchSample {
        double value = 0.0;
        double derivative = 0.0;  // Liouville formula, 0 when the point is trapped
    };

    /// Value of the backward integration alone on r in [0, 1).
    double branch(double r) const { return branch_sample(r).value; }
    BranchSample branch_sample(double r) const;

    /// dQ/dz at z, 0 on the spots.
    double derivative(double z) const;

    /// Index of the spot containing z (mod 1), or -1.
    int spot_index(double z) const;

    const FlatSpotData& spots() const { return spots_; }
    const Transversal& transversal() const { return tr_; }

private:
    Transversal tr_;
    FlatSpotData spots_;
};

double inverse_map_Q(double z, const Transversal& tr, const FlatSpotData& spots);

struct DriftResult {
    double slope = 0.0;
    double displacement = 0.0;
    std::vector<inertial::TimedState4> samples;
};

/// Least-squares slope of y against x over the second half of a 4D run.
/// Throws UnboundedDetectionFailure if the particle moved less than ten
/// cell widths.
DriftResult empirical_drift_slope(const inertial::PhaseState4& initial,
                                  const ForcingParams& params, double t_end,
                                  double sample_dt = 1.0);

}  // namespace cellflow::poincare
