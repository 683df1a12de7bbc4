#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "ode.hpp"
#include "types.hpp"

namespace cellflow::inertial {

struct FieldSample {
    Vec2 v;
    double div = 0.0;
    Mat2 jac;
};

/// A planar vector field with divergence and Jacobian.
///
/// Hamiltonian is the forced cellular field, Reduced adds epsilon times the
/// leading-order slow-manifold correction, Custom wraps a user evaluator.
/// Any kind may carry an additional constant drift (see with_offset).
class PlanarField {
public:
    enum class Kind { Hamiltonian, Reduced, Custom };
    using Evaluator = std::function<FieldSample(Vec2)>;

    static PlanarField hamiltonian(const ForcingParams& params);
    static PlanarField reduced(const ForcingParams& params);
    /// The unforced cell field (a = b = 0).
    static PlanarField cellular();
    static PlanarField custom(Evaluator eval, const ForcingParams& params = {});

    FieldSample eval(Vec2 p) const;
    Vec2 velocity(Vec2 p) const;
    double divergence(Vec2 p) const;

    /// Same field plus the constant vector w.
    PlanarField with_offset(Vec2 w) const;

    Kind kind() const { return kind_; }
    const ForcingParams& params() const { return params_; }
    Vec2 offset() const { return offset_; }

private:
    Kind kind_ = Kind::Hamiltonian;
    ForcingParams params_;
    Vec2 offset_;
    Evaluator custom_;
};

/// Leading-order correction f = -Dv v of the slow manifold.
Vec2 correction_f(Vec2 p, const ForcingParams& params);
Mat2 correction_jacobian(Vec2 p, const ForcingParams& params);

struct ReducedSample {
    Vec2 vector;
    double divergence = 0.0;
};

/// v + eps f with divergence eps (cos 2x + cos 2y).
ReducedSample reduced_field(Vec2 p, const ForcingParams& params);
Mat2 reduced_jacobian(Vec2 p, const ForcingParams& params);

struct Embedding {
    PlanarField carrying_field;
    double epsilon = 0.0;
    Vec2 terminal_velocity;
};

/// Constant external force m g on a particle with linear drag: the particle
/// relaxes to fluid + m g / drag at rate drag / m.
Embedding embed_external_force(const PlanarField& fluid_field, double mass,
                               double drag_coefficient, Vec2 gravity);

struct PhaseState4 {
    double x = 0.0, y = 0.0, vx = 0.0, vy = 0.0;
};

struct TimedState4 {
    double t = 0.0;
    PhaseState4 s;
};

struct Mr4dOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double sample_dt = 0.0;  // 0 keeps every accepted step
};

/// Smallest epsilon accepted by the explicit 4D integrator.
inline constexpr double kMinEpsilon = 1e-4;

/// x' = u, u' = -(u - v(x)) / eps for the carrying field v.
std::vector<TimedState4> integrate_mr4d(const PhaseState4& initial, const PlanarField& field,
                                        double epsilon, double t_end,
                                        const Mr4dOptions& opts = {});

/// Same with v the forced cellular field of `params`.
std::vector<TimedState4> integrate_mr4d(const PhaseState4& initial, const ForcingParams& params,
                                        double t_end, const Mr4dOptions& opts = {});

enum class Direction { Forward, Backward };

/// Saddle positions whose periodic images (shifts by (pi, pi) and (pi, -pi))
/// the integrator must avoid.
struct SaddleGuard {
    std::vector<Vec2> saddles;
    double radius = 1e-5;

    /// Distance from p to the nearest image of any listed saddle.
    double distance(Vec2 p) const;
};

struct PlanarOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    std::size_t stop_after = 1;  // stop after this many section crossings (0 = never)
    const SaddleGuard* guard = nullptr;
    bool record_path = false;
    double h_max = std::numeric_limits<double>::infinity();
};

struct EventTrace {
    std::vector<double> times;
    std::vector<Vec2> states;
    std::vector<double> div_integrals;  // integral of the divergence up to each event
    std::vector<int> section_index;     // which entry of `sections` was crossed
    int winding = 0;                    // signed count of crossings
    double t_final = 0.0;
    Vec2 final_state;
    double div_integral_final = 0.0;
    std::vector<Vec2> path;
};

/// Integrates the field, recording crossings of the vertical lines x = s for
/// s in `sections`. Time runs backwards for Direction::Backward; event times
/// are then reported as positive elapsed times. Throws NoEvent when t_end is
/// reached before stop_after crossings, SeparatrixHit when the guard fires.
EventTrace integrate_planar(Vec2 initial, const PlanarField& field,
                            const std::vector<double>& sections, double t_end,
                            Direction direction, const PlanarOptions& opts = {});

struct AreaCheck {
    double integral = 0.0;  // double integral of cos 2x + cos 2y over the interior
    double area = 0.0;
    double period = 0.0;
    Vec2 center;
    Vec2 start;
};

/// Center of the cell (near the origin) and the Hamiltonian level range of
/// its closed orbits, (H at the loop saddle, H at the center).
struct CellInfo {
    Vec2 center;
    double h_center = 0.0;
    double h_saddle = 0.0;
    Vec2 saddle;
};

CellInfo cell_info(const ForcingParams& params);

/// Traces the zero-inertia closed orbit H = level inside the cell around the
/// origin and integrates its area and the correction's divergence over its
/// interior by Green's theorem. Throws NotClosed if the level does not give a
/// closed orbit in that cell.
AreaCheck divergence_area_check(double level, const ForcingParams& params);

}  // namespace cellflow::inertial
