#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ri/pathspace.hpp"
#include "ri/rng.hpp"
#include "ri/scenario.hpp"

namespace ri {

struct TreeNode {
    int id = 0;
    UncertainState state;
    int parent = -1;  // -1 for the root
    std::vector<int> children;
    double edge_cost = 0.0;
    double path_cost = 0.0;
    bool alive = true;
};

/// Planner graph. Node ids are stable; pruning marks subtrees dead instead
/// of reindexing.
class Tree {
public:
    explicit Tree(const UncertainState& root_state);

    int add_node(const UncertainState& state, int parent, double edge_cost);
    void reparent(int id, int new_parent, double new_edge_cost);
    /// Recompute path costs over the subtree rooted at id (depth-first).
    /// Throws CorruptedTreeError on a cycle.
    void update_descendants(int id);
    /// Mark the subtree rooted at id dead; returns nodes removed.
    int remove_subtree(int id);

    const TreeNode& node(int id) const { return nodes_[id]; }
    int size() const { return static_cast<int>(nodes_.size()); }
    int alive_count() const { return alive_count_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    /// Path cost consistency, link symmetry, acyclicity.
    void audit() const;

private:
    std::vector<TreeNode> nodes_;
    int alive_count_ = 1;
};

/// Auxiliary metric: position gap plus Frobenius covariance gap.
double dhat(const UncertainState& a, const UncertainState& b);

/// Random SPD matrix R^T diag(lambda) R: eigenvalues uniform in [lo, hi],
/// R a uniformly random rotation (d=1 trivial, d=2 random angle, d=3 QR of
/// a Gaussian matrix with fixed signs).
SymMatrix random_spd(Rng& rng, int dim, double eig_lo, double eig_hi);

/// Uniform position in bounds; covariance from random_spd.
UncertainState generate(Rng& rng, const Rect& bounds,
                        std::pair<double, double> cov_eig_range);

/// Argmin of dhat over alive nodes; ties broken by smallest id.
int nearest(const Tree& tree, const UncertainState& z);

/// Pull the sample toward z_near so its dhat distance is at most ed_min;
/// componentwise convex combination, covariance floored on construction.
UncertainState steer(const UncertainState& z_near, const UncertainState& z_sampled,
                     double ed_min);

/// Alive nodes within the closed dhat ball of radius ed_nbors, in id order.
std::vector<int> neighbors(const Tree& tree, const UncertainState& z,
                           double ed_nbors);

struct ExtendOutcome {
    enum class Kind { Added, RejectedCollision };
    Kind kind = Kind::RejectedCollision;
    int node_id = -1;
};

/// One tree-growth step: steer the sample from its nearest node, pick the
/// cheapest collision-free parent among the neighbors (the nearest node is
/// always a candidate), then rewire neighbors through the new node where
/// that is strictly cheaper. Uses scn.planner for the radii and step.
ExtendOutcome extend(Tree& tree, const UncertainState& z_sampled,
                     const Scenario& scn);

/// Branch-and-bound sweep: drop every subtree whose root satisfies
/// path_cost + goal_lower_bound >= best goal cost. Nodes on the current
/// best path are never removed; the best goal cost must be unchanged.
/// Returns removed node count (0 until a goal node exists).
int prune(Tree& tree, const Scenario& scn);

/// Cheapest alive node inside the goal region, or -1.
int best_goal_node(const Tree& tree, const Scenario& scn);

struct PlanResult {
    std::optional<PiecewisePath> best_path;
    double best_cost = std::numeric_limits<double>::infinity();
    int best_node = -1;
    /// (iteration, best cost) recorded once a goal node exists; non-increasing.
    std::vector<std::pair<int, double>> cost_curve;
    std::uint64_t seed = 0;
    int iterations = 0;
    long long rejected = 0;
    std::shared_ptr<const Tree> tree;
};

/// One planning run over a scenario. Single-writer: all mutation happens on
/// the calling thread.
class Planner {
public:
    explicit Planner(const Scenario& scenario);

    PlanResult plan();

    const Tree& tree() const { return tree_; }
    PiecewisePath extract_path(int goal_node) const;

private:
    const Scenario& scn_;
    Tree tree_;
    Rng rng_;
    int audit_every_;
};

}  // namespace ri
