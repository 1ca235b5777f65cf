#include "ri/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace ri {

Scenario with_overrides(Scenario scn, const RunOverrides& o) {
    if (o.n_nodes) scn.planner.n_nodes = *o.n_nodes;
    if (o.seed) scn.planner.seed = *o.seed;
    if (o.alpha) scn.params = RiParams(*o.alpha, scn.params.W);
    return scn;
}

RunReport run_plan(const Scenario& scn_in, const RunOverrides& overrides,
                   const std::string& out_dir, PlanResult* result_out) {
    Scenario scn = with_overrides(scn_in, overrides);
    scn.validate();
    std::filesystem::create_directories(out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    Planner planner(scn);
    PlanResult res = planner.plan();
    const auto t1 = std::chrono::steady_clock::now();

    RunReport rep;
    rep.label = scn.label;
    rep.seed = scn.planner.seed;
    rep.n_nodes = scn.planner.n_nodes;
    rep.alpha = scn.params.alpha;
    rep.found = res.best_path.has_value();
    rep.nodes_alive = res.tree->alive_count();
    rep.nodes_total = res.tree->size();
    rep.edges = res.tree->alive_count() - 1;
    rep.rejected = res.rejected;
    rep.wall_time_s = std::chrono::duration<double>(t1 - t0).count();

    if (rep.found) {
        rep.best_cost = res.best_cost;
        const PathDecomposition dec = decompose_path(*res.best_path, scn.params);
        rep.euclid_len = dec.euclid;
        rep.info_bits = dec.bits;
        const double recomposed = dec.euclid + scn.params.alpha * dec.bits;
        if (std::abs(recomposed - rep.best_cost) > 1e-6)
            throw Error("run_plan: cost decomposition audit failed");
    }
    for (size_t i = 1; i < res.cost_curve.size(); ++i)
        if (res.cost_curve[i].second > res.cost_curve[i - 1].second)
            throw Error("run_plan: cost curve is not non-increasing");

    const auto path_of = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    std::ostringstream os;
    write_nodes_csv(os, *res.tree, scn.dim);
    write_file_atomic(path_of("nodes.csv"), os.str());
    os.str("");
    write_edges_csv(os, *res.tree);
    write_file_atomic(path_of("edges.csv"), os.str());
    os.str("");
    if (rep.found) {
        write_path_csv(os, *res.best_path);
    } else {
        os << "t";
        for (int i = 0; i < scn.dim; ++i) os << ",x" << (i + 1);
        for (int j = 0; j < scn.dim; ++j)
            for (int i = j; i < scn.dim; ++i) os << ",p" << (i + 1) << (j + 1);
        os << "\n";
    }
    write_file_atomic(path_of("best_path.csv"), os.str());
    os.str("");
    write_cost_curve_csv(os, res.cost_curve);
    write_file_atomic(path_of("cost_curve.csv"), os.str());
    os.str("");
    write_scene_svg(os, scn, *res.tree,
                    rep.found ? &*res.best_path : nullptr);
    write_file_atomic(path_of("scene.svg"), os.str());
    write_file_atomic(path_of("report.json"), report_to_json(rep));

    if (result_out) *result_out = std::move(res);
    return rep;
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<SweepRow> run_sweep(const Scenario& scn,
                                const std::vector<double>& alphas,
                                const std::vector<std::uint64_t>& seeds,
                                const RunOverrides& overrides,
                                const std::string& out_dir) {
    if (alphas.empty() || seeds.empty())
        throw ValidationError("sweep: need at least one alpha and one seed");
    std::filesystem::create_directories(out_dir);

    std::vector<SweepRow> rows;
    for (double alpha : alphas) {
        for (std::uint64_t seed : seeds) {
            SweepRow row;
            row.alpha = alpha;
            row.seed = seed;
            try {
                Scenario run_scn = with_overrides(scn, overrides);
                run_scn.params = RiParams(alpha, run_scn.params.W);
                run_scn.planner.seed = seed;
                run_scn.validate();
                Planner planner(run_scn);
                PlanResult res = planner.plan();
                row.ok = true;
                row.found = res.best_path.has_value();
                if (row.found) {
                    row.best_cost = res.best_cost;
                    const PathDecomposition dec =
                        decompose_path(*res.best_path, run_scn.params);
                    row.euclid_len = dec.euclid;
                    row.info_bits = dec.bits;
                }
            } catch (const Error& e) {
                std::cerr << "sweep: alpha=" << alpha << " seed=" << seed
                          << " failed: " << e.what() << "\n";
            }
            rows.push_back(row);
        }
    }

    std::ostringstream os;
    os << "alpha,seed,best_cost,euclid_len,info_bits\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (const SweepRow& r : rows) {
        put(r.alpha);
        os << "," << r.seed << ",";
        if (r.ok && r.found) {
            put(r.best_cost);
            os << ",";
            put(r.euclid_len);
            os << ",";
            put(r.info_bits);
        } else {
            os << ",,";
        }
        os << "\n";
    }
    for (double alpha : alphas) {
        std::vector<double> costs, lens, bits;
        for (const SweepRow& r : rows)
            if (r.alpha == alpha && r.ok && r.found) {
                costs.push_back(r.best_cost);
                lens.push_back(r.euclid_len);
                bits.push_back(r.info_bits);
            }
        if (costs.empty()) continue;
        put(alpha);
        os << ",median,";
        put(median(costs));
        os << ",";
        put(median(lens));
        os << ",";
        put(median(bits));
        os << "\n";
    }
    write_file_atomic((std::filesystem::path(out_dir) / "sweep.csv").string(),
                      os.str());
    return rows;
}

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Shortest paths in the uncertain configuration space under the "
                 "rationally inattentive travel+information cost"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out";
    int nodes = 0;
    std::uint64_t seed = 0;
    double alpha = -1.0;
    CLI::Option *nodes_opt_plan, *seed_opt_plan, *alpha_opt, *nodes_opt_sweep,
        *seed_opt_sweep;

    CLI::App* plan = app.add_subcommand("plan", "run the planner once");
    plan->add_option("scenario", scenario_path, "scenario file")->required();
    nodes_opt_plan = plan->add_option("--nodes", nodes, "node budget override");
    seed_opt_plan = plan->add_option("--seed", seed, "RNG seed override");
    plan->add_option("--out", out_dir, "output directory");
    alpha_opt = plan->add_option("--alpha", alpha, "information weight override");

    CLI::App* sweep = app.add_subcommand("sweep", "alpha x seed cross product");
    sweep->add_option("scenario", scenario_path, "scenario file")->required();
    nodes_opt_sweep = sweep->add_option("--nodes", nodes, "node budget override");
    seed_opt_sweep = sweep->add_option("--seed", seed, "RNG seed override");
    sweep->add_option("--out", out_dir, "output directory");
    std::vector<double> sweep_alphas;
    std::vector<std::uint64_t> sweep_seeds;
    sweep->add_option("--alphas", sweep_alphas, "alpha values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--seeds", sweep_seeds, "seeds")->required()->delimiter(',');

    CLI::App* verify = app.add_subcommand("verify", "run the oracle gates");
    double perturb = 0.0;
    verify->add_option("--self-test-perturb", perturb,
                       "shift the closed-form information cost (negative control)");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 3;
    }

    try {
        if (verify->parsed()) {
            return run_verify(std::cout, perturb) ? 0 : 4;
        }
        RunOverrides ov;
        if (nodes_opt_plan->count() || nodes_opt_sweep->count()) ov.n_nodes = nodes;
        if (seed_opt_plan->count() || seed_opt_sweep->count()) ov.seed = seed;
        if (alpha_opt->count()) ov.alpha = alpha;
        const Scenario scn = load_scenario(scenario_path);
        if (plan->parsed()) {
            const RunReport rep = run_plan(scn, ov, out_dir);
            std::cout << report_to_json(rep);
            return rep.found ? 0 : 2;
        }
        const auto rows = run_sweep(scn, sweep_alphas, sweep_seeds, ov, out_dir);
        bool any_found = false;
        for (const SweepRow& r : rows) any_found = any_found || (r.ok && r.found);
        std::cout << "sweep: " << rows.size() << " runs written to " << out_dir
                  << "/sweep.csv\n";
        return any_found ? 0 : 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << " (line " << e.line << ")\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace ri
