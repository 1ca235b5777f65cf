#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ri/outputs.hpp"
#include "ri/scenario_io.hpp"
#include "ri/verify.hpp"

namespace ri {

struct RunOverrides {
    std::optional<int> n_nodes;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
};

Scenario with_overrides(Scenario scn, const RunOverrides& overrides);

/// Plan on a scenario and emit nodes.csv, edges.csv, best_path.csv,
/// cost_curve.csv, scene.svg and report.json under out_dir (created if
/// needed). Audits the cost decomposition and the cost curve monotonicity.
RunReport run_plan(const Scenario& scn, const RunOverrides& overrides,
                   const std::string& out_dir, PlanResult* result_out = nullptr);

struct SweepRow {
    double alpha = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    bool found = false;
    double best_cost = 0.0;
    double euclid_len = 0.0;
    double info_bits = 0.0;
};

/// Cross product of alphas x seeds; per-run failures are recorded and the
/// sweep continues. Writes sweep.csv (per-run rows plus per-alpha median
/// summary rows) under out_dir.
std::vector<SweepRow> run_sweep(const Scenario& scn,
                                const std::vector<double>& alphas,
                                const std::vector<std::uint64_t>& seeds,
                                const RunOverrides& overrides,
                                const std::string& out_dir);

double median(std::vector<double> values);

/// Exit codes: 0 success, 2 no path, 3 validation/usage error, 4 verify
/// failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace ri
