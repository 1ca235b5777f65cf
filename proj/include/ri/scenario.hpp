#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ri/collision.hpp"

namespace ri {

struct PlannerConfig {
    double ed_min = 0.0;      // steering radius in the auxiliary metric
    double ed_nbors = 0.0;    // neighbor radius
    int n_nodes = 4000;       // total node budget, root included
    std::uint64_t seed = 1;
    int prune_every = 200;    // iterations between branch-and-bound sweeps
    double cov_eig_lo = kPFloor;
    double cov_eig_hi = 0.0;  // covariance eigenvalue sampling range
    double ds = 0.0;          // transition check step; 0 -> ed_min / 10
    int audit_every = 0;      // 0 -> 1 in debug builds, 100 in release
};

/// A full problem instance: workspace, obstacles, endpoints, weights, and
/// planner knobs.
struct Scenario {
    int dim = 0;
    Rect bounds;
    std::vector<Obstacle> obstacles;
    UncertainState init;
    GoalRegion goal;
    RiParams params;
    ChiSquare chi2;
    PlannerConfig planner;
    std::string label;

    /// Fill zero/unset planner knobs from the workspace geometry:
    /// ed_min = 5% of the workspace diagonal, ed_nbors = 3 ed_min,
    /// cov_eig_hi = (diagonal/4)^2, ds = ed_min/10.
    void apply_defaults();
    void validate() const;
};

}  // namespace ri
