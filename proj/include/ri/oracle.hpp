#pragma once

#include "ri/scenario.hpp"

namespace ri::oracle {

/// Numeric reference for the information cost: solves the whitened max-det
/// program max log det Q' s.t. 0 <= Q' <= I, Q' <= M by projected gradient
/// ascent with alternating eigenvalue-clipping projections, step 1/k, at most
/// 1e4 iterations from the feasible point 0.5 * min(1, lambda_min(M)) * I.
/// Returns bits. Independent of the closed form it gates.
double maxdet_oracle(const SymMatrix& P_hat, const SymMatrix& P_next);

/// Product graph for the Dijkstra baseline: position cells (8-neighbor at
/// d=2, 2-neighbor at d=1) times a finite ladder of covariance levels with
/// all-pairs level transitions.
struct GridSpec {
    std::vector<int> cells_per_axis;
    std::vector<SymMatrix> cov_levels;  // ascending, all PD, at most 64

    /// Per-axis log-spaced isotropic levels over [lo, hi].
    static GridSpec make(const Scenario& scn, int cells, int n_levels, double lo,
                         double hi);
};

/// Cheapest cost from the initial state into the goal set over the product
/// graph; edges are move-and-sense transitions weighted by ri_distance and
/// kept only when collision-free. Returns +infinity if the goal is
/// unreachable. Upper bound on the continuous optimum.
double grid_dijkstra(const Scenario& scn, const GridSpec& grid);

/// Exact obstacle-free 1-D optimum: travel straight to the goal box, then
/// sense once: dist + alpha * max(0, 0.5 log2((P0 + dist W)/P_max)).
double analytic_1d_optimum(double x0, double P0, const GoalRegion& goal,
                           const RiParams& params);

/// Cost of the two-sense 1-D path (x0,P0) -> (x_a,P_a) -> (xT,P_T) with the
/// first measurement at fraction beta of the travel. Requires
/// P0 + beta L W > P_a and P_a + (1-beta) L W > P_T (throws InvalidSplitError).
double split_cost_1d(double x0, double P0, double xT, double P_T, double beta,
                     double P_a, const RiParams& params);

}  // namespace ri::oracle
