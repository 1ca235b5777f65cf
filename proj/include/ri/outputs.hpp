#pragma once

#include <iosfwd>
#include <string>

#include "ri/planner.hpp"

namespace ri {

/// Per-run summary. The cost decomposition satisfies
/// best_cost = euclid_len + alpha * info_bits to 1e-6 (audited on every run).
struct RunReport {
    std::string label;
    std::uint64_t seed = 0;
    int n_nodes = 0;
    double alpha = 0.0;
    bool found = false;
    double best_cost = 0.0;
    double euclid_len = 0.0;
    double info_bits = 0.0;
    int nodes_alive = 0;
    int nodes_total = 0;
    int edges = 0;
    long long rejected = 0;
    double wall_time_s = 0.0;
};

void write_nodes_csv(std::ostream& os, const Tree& tree, int dim);
void write_edges_csv(std::ostream& os, const Tree& tree);
void write_cost_curve_csv(std::ostream& os,
                          const std::vector<std::pair<int, double>>& curve);
std::string report_to_json(const RunReport& report);

/// Deterministic SVG rendering: obstacles, tree edges, the best path with
/// chi-squared covariance ellipses (black at path nodes, blue for covariance
/// propagated along transitions). 1-D scenes are drawn in the (x, P) plane.
void write_scene_svg(std::ostream& os, const Scenario& scn, const Tree& tree,
                     const PiecewisePath* best_path);

/// Write via a temp file and rename, so partial files are never visible.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ri
