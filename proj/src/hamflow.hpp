#pragma once

#include <vector>

#include "types.hpp"

namespace cellflow::hamflow {

struct HamiltonianSample {
    double h = 0.0;
    Vec2 field;
};

/// H = cos x cos y - a x + b y and its symplectic gradient (H_y, -H_x).
HamiltonianSample eval_hamiltonian_system(Vec2 p, const ForcingParams& params);

double hamiltonian(Vec2 p, const ForcingParams& params);
Vec2 velocity(Vec2 p, const ForcingParams& params);
Mat2 velocity_jacobian(Vec2 p, const ForcingParams& params);

enum class Parity { Odd, Even };

/// Lattice node (pi/2 + pi k1, pi/2 + pi k2).
struct LatticeNode {
    int k1 = 0;
    int k2 = 0;

    Vec2 position() const { return {kHalfPi + kPi * k1, kHalfPi + kPi * k2}; }
    Parity parity() const { return ((k1 + k2) % 2 != 0) ? Parity::Odd : Parity::Even; }
    bool operator==(const LatticeNode&) const = default;
};

/// Lattice node closest to p.
LatticeNode nearest_node(Vec2 p);

struct SaddlePoint {
    Vec2 position;
    Parity parity = Parity::Odd;
    double h_value = 0.0;
    LatticeNode grid_node;
};

/// Default bound on |a|, |b| inside which the closed-form saddle seeds are
/// trusted.
inline constexpr double kRegimeBound = 0.1;

/// Saddles of the Hamiltonian field, one per lattice node inside `window`.
/// Newton-polished from the closed-form positions; throws NonConvergence if
/// Newton stalls and DomainError outside 0 < a, b <= regime_bound.
std::vector<SaddlePoint> find_saddles(const ForcingParams& params, const Rect& window,
                                      double regime_bound = kRegimeBound);

/// Saddle attached to a single lattice node.
SaddlePoint saddle_at(const LatticeNode& node, const ForcingParams& params);

/// K = (F(b - a) - F(b + a)) / 2 with F(x) = sqrt(1 - x^2) + x asin x.
double k_constant(const ForcingParams& params);

enum class Turn { L, R };

inline char turn_char(Turn t) { return t == Turn::L ? 'L' : 'R'; }

/// Constants (c_odd, c_even) = (h0 - K, h0 + K) of the two label lines.
struct LinePair {
    double c_odd = 0.0;
    double c_even = 0.0;
};

LinePair chess_lines(const ForcingParams& params, double h0);

/// Turn taken at a grid saddle by an unbounded trajectory on level h0.
///
/// With c the line constant for the node's parity, the trajectory turns left
/// when b y - a x < c and right when b y - a x > c. Throws OnLineError when
/// |b y - a x - c| < on_line_tol.
Turn chess_turn_label(const LatticeNode& node, const ForcingParams& params, double h0,
                      double on_line_tol = 1e-9);

/// Directed lattice edge from `from` to its neighbour from + (dk1, dk2),
/// with exactly one of dk1, dk2 equal to +-1.
struct DirectedEdge {
    LatticeNode from;
    int dk1 = 1;
    int dk2 = 0;

    LatticeNode to() const { return {from.k1 + dk1, from.k2 + dk2}; }
};

struct ChessPath {
    std::vector<LatticeNode> vertices;
    std::vector<Turn> turns;
    double h0 = 0.0;
    LinePair lines;
};

/// Walks n_turns turns of the path-generating rule starting along `start`.
/// vertices holds start.from followed by every turning node, so
/// vertices.size() == n_turns + 2 (the final edge's endpoint included).
ChessPath chess_path(const DirectedEdge& start, const ForcingParams& params, double h0,
                     int n_turns, double on_line_tol = 1e-9);

/// Exact lift of the zero-inertia return map: z + (a - b) / (2 b).
double rigid_rotation_p0(double z, const ForcingParams& params);

}  // namespace cellflow::hamflow
