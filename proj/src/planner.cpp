#include "ri/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ri {

Tree::Tree(const UncertainState& root_state) {
    TreeNode root;
    root.id = 0;
    root.state = root_state;
    root.parent = -1;
    root.edge_cost = 0.0;
    root.path_cost = 0.0;
    nodes_.push_back(std::move(root));
}

int Tree::add_node(const UncertainState& state, int parent, double edge_cost) {
    if (parent < 0 || parent >= size() || !nodes_[parent].alive)
        throw CorruptedTreeError("add_node: bad parent");
    TreeNode n;
    n.id = size();
    n.state = state;
    n.parent = parent;
    n.edge_cost = edge_cost;
    n.path_cost = nodes_[parent].path_cost + edge_cost;
    nodes_.push_back(std::move(n));
    nodes_[parent].children.push_back(nodes_.back().id);
    ++alive_count_;
    return nodes_.back().id;
}

void Tree::reparent(int id, int new_parent, double new_edge_cost) {
    TreeNode& n = nodes_[id];
    auto& old_children = nodes_[n.parent].children;
    old_children.erase(std::find(old_children.begin(), old_children.end(), id));
    n.parent = new_parent;
    n.edge_cost = new_edge_cost;
    nodes_[new_parent].children.push_back(id);
    update_descendants(id);
}

void Tree::update_descendants(int id) {
    std::vector<int> stack{id};
    size_t processed = 0;
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        if (++processed > nodes_.size())
            throw CorruptedTreeError("update_descendants: cycle detected");
        TreeNode& n = nodes_[cur];
        if (n.parent >= 0) n.path_cost = nodes_[n.parent].path_cost + n.edge_cost;
        for (int c : n.children) stack.push_back(c);
    }
}

int Tree::remove_subtree(int id) {
    TreeNode& n = nodes_[id];
    if (!n.alive) return 0;
    if (n.parent >= 0) {
        auto& siblings = nodes_[n.parent].children;
        siblings.erase(std::find(siblings.begin(), siblings.end(), id));
    }
    int removed = 0;
    std::vector<int> stack{id};
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        TreeNode& m = nodes_[cur];
        if (!m.alive) continue;
        m.alive = false;
        ++removed;
        for (int c : m.children) stack.push_back(c);
        m.children.clear();
    }
    alive_count_ -= removed;
    return removed;
}

void Tree::audit() const {
    if (nodes_[0].path_cost != 0.0 || nodes_[0].parent != -1)
        throw CorruptedTreeError("audit: bad root");
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> stack{0};
    int visited = 0;
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        if (seen[cur]) throw CorruptedTreeError("audit: cycle");
        seen[cur] = 1;
        ++visited;
        const TreeNode& n = nodes_[cur];
        if (!n.alive) throw CorruptedTreeError("audit: dead node reachable from root");
        for (int c : n.children) {
            const TreeNode& ch = nodes_[c];
            if (ch.parent != cur) throw CorruptedTreeError("audit: asymmetric link");
            // Same accumulation as update_descendants, so equality is exact.
            if (ch.path_cost != n.path_cost + ch.edge_cost)
                throw CorruptedTreeError("audit: path cost mismatch");
            if (ch.edge_cost < 0.0) throw CorruptedTreeError("audit: negative edge");
            stack.push_back(c);
        }
    }
    if (visited != alive_count_)
        throw CorruptedTreeError("audit: alive nodes unreachable from root");
}

double dhat(const UncertainState& a, const UncertainState& b) {
    return (b.x - a.x).norm() + (b.P - a.P).frobenius();
}

SymMatrix random_spd(Rng& rng, int d, double eig_lo, double eig_hi) {
    double lam[kMaxDim];
    for (int i = 0; i < d; ++i) lam[i] = rng.uniform(eig_lo, eig_hi);

    SymMatrix P(d);
    if (d == 1) {
        P.set(0, 0, lam[0]);
    } else if (d == 2) {
        const double a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        const double c = std::cos(a), s = std::sin(a);
        P.set(0, 0, c * c * lam[0] + s * s * lam[1]);
        P.set(1, 1, s * s * lam[0] + c * c * lam[1]);
        P.set(0, 1, c * s * (lam[0] - lam[1]));
    } else {
        // Rotation from the QR factorization of a Gaussian matrix, signs fixed
        // so the diagonal of R is positive.
        double g[kMaxDim][kMaxDim];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g[i][j] = rng.gaussian();
        double q[kMaxDim][kMaxDim];
        for (int j = 0; j < d; ++j) {
            double col[kMaxDim];
            for (int i = 0; i < d; ++i) col[i] = g[i][j];
            for (int k = 0; k < j; ++k) {
                double dot = 0.0;
                for (int i = 0; i < d; ++i) dot += q[i][k] * g[i][j];
                for (int i = 0; i < d; ++i) col[i] -= dot * q[i][k];
            }
            double nrm = 0.0;
            for (int i = 0; i < d; ++i) nrm += col[i] * col[i];
            nrm = std::sqrt(nrm);
            if (nrm < 1e-12) nrm = 1.0;
            double sign = 1.0;
            double diag = 0.0;
            for (int i = 0; i < d; ++i) diag += col[i] * g[i][j];
            if (diag < 0.0) sign = -1.0;
            for (int i = 0; i < d; ++i) q[i][j] = sign * col[i] / nrm;
        }
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double s = 0.0;
                for (int k = 0; k < d; ++k) s += q[i][k] * lam[k] * q[j][k];
                P.set(i, j, s);
            }
    }
    return P;
}

UncertainState generate(Rng& rng, const Rect& bounds,
                        std::pair<double, double> cov_eig_range) {
    const int d = bounds.dim();
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(bounds.lo[i], bounds.hi[i]);
    const SymMatrix P = random_spd(rng, d, cov_eig_range.first, cov_eig_range.second);
    return UncertainState(x, P);
}

int nearest(const Tree& tree, const UncertainState& z) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const TreeNode& n : tree.nodes()) {
        if (!n.alive) continue;
        const double d = dhat(n.state, z);
        if (d < best_d) {
            best_d = d;
            best = n.id;
        }
    }
    if (best < 0) throw CorruptedTreeError("nearest: empty tree");
    return best;
}

UncertainState steer(const UncertainState& z_near, const UncertainState& z_sampled,
                     double ed_min) {
    const double d = dhat(z_near, z_sampled);
    if (d <= ed_min) return z_sampled;
    const double w = ed_min / d;
    Vec x = z_near.x + (z_sampled.x - z_near.x) * w;
    SymMatrix P = z_near.P + (z_sampled.P - z_near.P) * w;
    return UncertainState(x, P);
}

std::vector<int> neighbors(const Tree& tree, const UncertainState& z,
                           double ed_nbors) {
    std::vector<int> out;
    for (const TreeNode& n : tree.nodes())
        if (n.alive && dhat(n.state, z) <= ed_nbors) out.push_back(n.id);
    return out;
}

namespace {

bool transition_ok(const UncertainState& from, const UncertainState& to,
                   const Scenario& scn) {
    return transition_clear(from, to, scn.params, scn.chi2.value, scn.obstacles,
                            scn.bounds, scn.planner.ds);
}

}  // namespace

ExtendOutcome extend(Tree& tree, const UncertainState& z_sampled,
                     const Scenario& scn) {
    const int near_id = nearest(tree, z_sampled);
    const UncertainState z_new =
        steer(tree.node(near_id).state, z_sampled, scn.planner.ed_min);

    if (!transition_ok(tree.node(near_id).state, z_new, scn))
        return {ExtendOutcome::Kind::RejectedCollision, -1};

    std::vector<int> nbors = neighbors(tree, z_new, scn.planner.ed_nbors);
    // The nearest node is always a parent candidate, even outside the ball.
    if (std::find(nbors.begin(), nbors.end(), near_id) == nbors.end()) {
        nbors.push_back(near_id);
        std::sort(nbors.begin(), nbors.end());
    }

    int best_parent = near_id;
    double best_cost = tree.node(near_id).path_cost +
                       ri_distance(tree.node(near_id).state, z_new, scn.params);
    for (int j : nbors) {
        if (j == near_id) continue;
        const TreeNode& nj = tree.node(j);
        const double cost = nj.path_cost + ri_distance(nj.state, z_new, scn.params);
        const bool better = cost < best_cost || (cost == best_cost && j < best_parent);
        if (better && transition_ok(nj.state, z_new, scn)) {
            best_cost = cost;
            best_parent = j;
        }
    }

    const int new_id =
        tree.add_node(z_new, best_parent, best_cost - tree.node(best_parent).path_cost);

    // Rewire the remaining neighbors through the new node when that is
    // strictly cheaper. The reverse transition is re-checked: clearance of
    // the move-and-sense path is direction-dependent.
    for (int j : nbors) {
        if (j == best_parent) continue;
        const TreeNode& nj = tree.node(j);
        const double rewired = best_cost + ri_distance(z_new, nj.state, scn.params);
        if (rewired < nj.path_cost && transition_ok(z_new, nj.state, scn))
            tree.reparent(j, new_id, rewired - best_cost);
    }
    return {ExtendOutcome::Kind::Added, new_id};
}

int best_goal_node(const Tree& tree, const Scenario& scn) {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const TreeNode& n : tree.nodes())
        if (n.alive && n.path_cost < best_cost && scn.goal.contains(n.state)) {
            best_cost = n.path_cost;
            best = n.id;
        }
    return best;
}

int prune(Tree& tree, const Scenario& scn) {
    const int goal_id = best_goal_node(tree, scn);
    if (goal_id < 0) return 0;
    const double best_cost = tree.node(goal_id).path_cost;

    std::vector<char> protected_ids(tree.size(), 0);
    for (int cur = goal_id; cur >= 0; cur = tree.node(cur).parent)
        protected_ids[cur] = 1;

    int removed = 0;
    for (int id = 0; id < tree.size(); ++id) {
        const TreeNode& n = tree.node(id);
        if (!n.alive || protected_ids[id]) continue;
        if (n.path_cost + goal_lower_bound(n.state, scn.goal, scn.params) >=
            best_cost)
            removed += tree.remove_subtree(id);
    }

    const int after = best_goal_node(tree, scn);
    if (after < 0 || tree.node(after).path_cost != best_cost)
        throw CorruptedTreeError("prune: best goal cost changed");
    return removed;
}

Planner::Planner(const Scenario& scenario)
    : scn_(scenario), tree_(scenario.init), rng_(scenario.planner.seed) {
    audit_every_ = scn_.planner.audit_every;
    if (audit_every_ <= 0) {
#ifdef NDEBUG
        audit_every_ = 100;
#else
        audit_every_ = 1;
#endif
    }
    if (!state_clear(scn_.init.x, scn_.init.P, scn_.chi2.value, scn_.obstacles,
                     scn_.bounds))
        throw InfeasibleStartError("planner: initial state is in collision");
}

PiecewisePath Planner::extract_path(int goal_node) const {
    std::vector<int> chain;
    for (int cur = goal_node; cur >= 0; cur = tree_.node(cur).parent)
        chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());
    std::vector<PathSample> samples;
    samples.reserve(chain.size());
    // Timestamps are sample indices: edges may have zero travel length
    // (pure sensing), so cumulative distance is not strictly increasing.
    for (size_t i = 0; i < chain.size(); ++i)
        samples.push_back({static_cast<double>(i), tree_.node(chain[i]).state});
    if (samples.size() == 1)
        samples.push_back({1.0, samples.front().state});
    return PiecewisePath(std::move(samples));
}

PlanResult Planner::plan() {
    PlanResult result;
    result.seed = scn_.planner.seed;

    int best_known = -1;
    for (int i = 2; i <= scn_.planner.n_nodes; ++i) {
        const UncertainState sample = generate(
            rng_, scn_.bounds, {scn_.planner.cov_eig_lo, scn_.planner.cov_eig_hi});
        const ExtendOutcome out = ri::extend(tree_, sample, scn_);
        if (out.kind == ExtendOutcome::Kind::RejectedCollision) ++result.rejected;

        if (scn_.planner.prune_every > 0 && i % scn_.planner.prune_every == 0)
            ri::prune(tree_, scn_);
        if (i % audit_every_ == 0) tree_.audit();

        best_known = ri::best_goal_node(tree_, scn_);
        if (best_known >= 0)
            result.cost_curve.emplace_back(i, tree_.node(best_known).path_cost);
        ++result.iterations;
    }
    tree_.audit();

    const int goal_id = best_known >= 0 ? best_known : ri::best_goal_node(tree_, scn_);
    if (goal_id >= 0) {
        result.best_node = goal_id;
        result.best_cost = tree_.node(goal_id).path_cost;
        result.best_path = extract_path(goal_id);
    }
    result.tree = std::make_shared<const Tree>(tree_);
    return result;
}

}  // namespace ri
