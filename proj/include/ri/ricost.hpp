#pragma once

#include "ri/matnum.hpp"
#include "ri/vec.hpp"

namespace ri {

/// Covariance eigenvalue floor applied wherever a state is constructed.
inline constexpr double kPFloor = 1e-8;

/// A point z = (x, P) in R^d x S++^d: nominal position plus covariance.
/// Construction floors P's eigenvalues at kPFloor so PD membership stays decidable.
struct UncertainState {
    Vec x;
    SymMatrix P;

    UncertainState() = default;
    UncertainState(Vec position, SymMatrix covariance);

    int dim() const { return x.dim(); }
};

/// Cost weights: alpha trades information bits against travel distance,
/// W is the process-noise intensity (units^2 per unit distance).
struct RiParams {
    double alpha = 1.0;
    SymMatrix W;

    RiParams() = default;
    RiParams(double a, SymMatrix w);
};

/// Target set: a position box plus an upper covariance bound.
struct GoalRegion {
    Vec x_lo;
    Vec x_hi;
    SymMatrix P_max;

    bool contains(const UncertainState& z) const;
    Vec closest_point(const Vec& x) const;  // clamp to the box
};

/// Euclidean travel distance between commanded positions.
double d_cont(const Vec& x_from, const Vec& x_to);

/// Open-loop covariance growth over a move: P + dist * W.
SymMatrix propagate(const SymMatrix& P, double dist, const SymMatrix& W);

/// Minimum bits of sensor information to go from prior P_hat to posterior
/// P_next: (1/2) sum_i max(0, -log2 mu_i) with mu_i the eigenvalues of the
/// pencil (P_next, P_hat). This is the exact optimum of the underlying
/// max-det program; directions where covariance grows cost nothing.
double d_info(const SymMatrix& P_hat, const SymMatrix& P_next);

/// Directed distance between uncertain states:
/// travel + alpha * bits needed after propagating P_from along the move.
double ri_distance(const UncertainState& z_from, const UncertainState& z_to,
                   const RiParams& params);

/// Cost of reaching the most permissive goal state (closest box point, P_max);
/// used as a pruning bound.
double goal_lower_bound(const UncertainState& z, const GoalRegion& goal,
                        const RiParams& params);

}  // namespace ri
