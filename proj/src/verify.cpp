#include "ri/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "ri/planner.hpp"

namespace ri {

namespace {

constexpr double kLog2E = 1.4426950408889634;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

PiecewisePath random_pl_path(Rng& rng, int d, int max_breaks, double p_lo,
                             double p_hi) {
    const int nb = rng.uniform_int(2, max_breaks);
    std::vector<PathSample> samples;
    double t = 0.0;
    for (int i = 0; i < nb; ++i) {
        if (i > 0) t += rng.uniform(0.1, 1.0);
        Vec x(d);
        for (int k = 0; k < d; ++k) x[k] = rng.uniform(-3.0, 3.0);
        samples.push_back({t, UncertainState(x, random_spd(rng, d, p_lo, p_hi))});
    }
    return PiecewisePath(std::move(samples));
}

}  // namespace

CheckResult check_dinfo_gate(int pairs_per_dim, std::uint64_t seed, double perturb) {
    Rng rng(seed);
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d) {
        for (int i = 0; i < pairs_per_dim; ++i) {
            const SymMatrix P_hat = random_spd(rng, d, 0.05, 4.0);
            const SymMatrix P_next = random_spd(rng, d, 0.05, 4.0);
            const double closed = d_info(P_hat, P_next) + perturb;
            const double reference = oracle::maxdet_oracle(P_hat, P_next);
            worst = std::max(worst, std::abs(closed - reference));
        }
    }
    return {"dinfo-maxdet-gate", worst <= 1e-6, worst,
            "max |closed form - numeric max-det| = " + fmt("%.3e", worst)};
}

CheckResult check_lemma1_supnorm_le_tvnorm(int n_paths, std::uint64_t seed) {
    Rng rng(seed);
    double worst = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int i = 0; i < n_paths; ++i) {
        const int d = 1 + i % 3;
        const PiecewisePath path = random_pl_path(rng, d, 20, 0.1, 3.0);
        const double gap = sup_norm(path) - tv_norm(path);
        worst = std::max(worst, gap);
        if (gap > 1e-12) ++violations;
    }
    return {"supnorm-le-tvnorm", violations == 0, worst,
            std::to_string(violations) + " violations, worst gap " +
                fmt("%.3e", worst)};
}

CheckResult check_lemma2_lipschitz(int n_tuples, std::uint64_t seed) {
    const double eps = 0.5, delta = 0.25;
    const double L = std::max(1.0 + kLog2E / eps, kLog2E / (eps * eps));
    const RiParams params(1.0, SymMatrix::isotropic(1, 1.0));

    Rng rng(seed);
    auto state = [](double x, double p) {
        return UncertainState(Vec{x}, SymMatrix::diag({p}));
    };
    double worst = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int i = 0; i < n_tuples; ++i) {
        const double xk = rng.uniform(-5.0, 5.0), xk1 = rng.uniform(-5.0, 5.0);
        const double pk = rng.uniform(eps + delta, 4.0);
        const double pk1 = rng.uniform(eps + delta, 4.0);
        const double dxk = rng.uniform(-delta, delta);
        const double dxk1 = rng.uniform(-delta, delta);
        const double dpk = rng.uniform(-delta, delta);
        const double dpk1 = rng.uniform(-delta, delta);

        const double base = ri_distance(state(xk, pk), state(xk1, pk1), params);
        const double pert =
            ri_distance(state(xk + dxk, pk + dpk), state(xk1 + dxk1, pk1 + dpk1),
                        params);
        const double bound = L * (std::abs(dxk1 - dxk) + std::abs(dpk1 - dpk) +
                                  delta * std::abs(pk1 - pk) +
                                  delta * std::abs(xk1 - xk));
        const double gap = std::abs(pert - base) - bound;
        worst = std::max(worst, gap);
        if (gap > 1e-12) ++violations;
    }
    return {"lemma2-lipschitz", violations == 0, worst,
            std::to_string(violations) + " violations, worst excess " +
                fmt("%.3e", worst)};
}

CheckResult check_theorem1_tv_perturbation(int n_pairs, std::uint64_t seed) {
    const double eps = 0.5, delta = 0.2;
    const double L = std::max(1.0 + kLog2E / eps, kLog2E / (eps * eps));
    const RiParams params(1.0, SymMatrix::isotropic(1, 1.0));
    const int refine = 64;

    Rng rng(seed);
    double worst = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int i = 0; i < n_pairs; ++i) {
        const int nb = rng.uniform_int(2, 8);
        std::vector<double> ts{0.0};
        for (int k = 1; k < nb; ++k) ts.push_back(ts.back() + rng.uniform(0.2, 1.0));

        std::vector<PathSample> base, pert;
        // Perturbation increments scaled so |gamma' - gamma|_TV < delta.
        std::vector<double> dx(nb), dp(nb);
        double tv_eta = 0.0;
        for (int k = 0; k < nb; ++k) {
            dx[k] = rng.uniform(-1.0, 1.0);
            dp[k] = rng.uniform(-1.0, 1.0);
        }
        tv_eta = std::abs(dx[0]) + std::abs(dp[0]);
        for (int k = 1; k < nb; ++k)
            tv_eta += std::abs(dx[k] - dx[k - 1]) + std::abs(dp[k] - dp[k - 1]);
        const double scale = 0.9 * delta / std::max(tv_eta, 1e-9);
        for (int k = 0; k < nb; ++k) {
            const double x = rng.uniform(-2.0, 2.0);
            const double p = rng.uniform(2.0 * eps, 2.0 * eps + 2.0);
            base.push_back({ts[k], UncertainState(Vec{x}, SymMatrix::diag({p}))});
            pert.push_back({ts[k], UncertainState(Vec{x + scale * dx[k]},
                                                  SymMatrix::diag({p + scale * dp[k]}))});
        }
        const PiecewisePath g(base), gp(pert);

        // Common partition: breakpoints plus uniform refinement per segment.
        double cg = 0.0, cgp = 0.0;
        for (int k = 0; k + 1 < nb; ++k) {
            UncertainState a = g.at(ts[k]);
            UncertainState ap = gp.at(ts[k]);
            for (int r = 1; r <= refine; ++r) {
                const double t =
                    ts[k] + (ts[k + 1] - ts[k]) * static_cast<double>(r) / refine;
                const UncertainState b = g.at(t);
                const UncertainState bp = gp.at(t);
                cg += ri_distance(a, b, params);
                cgp += ri_distance(ap, bp, params);
                a = b;
                ap = bp;
            }
        }
        const double bound = L * (1.0 + tv_norm(g)) * delta;
        const double gap = std::abs(cgp - cg) - bound;
        worst = std::max(worst, gap);
        if (gap > 1e-9) ++violations;
    }
    return {"theorem1-tv-perturbation", violations == 0, worst,
            std::to_string(violations) + " violations, worst excess " +
                fmt("%.3e", worst)};
}

namespace {

struct SplitSample {
    double x0, P0, xT, P_T, beta, P_a;
    RiParams params;
    bool degenerate;
};

SplitSample random_split(Rng& rng, bool degenerate) {
    SplitSample s;
    s.x0 = rng.uniform(-3.0, 3.0);
    s.xT = s.x0 + (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 5.0);
    s.P0 = rng.uniform(0.2, 3.0);
    const double alpha = rng.uniform(0.2, 2.0);
    const double w = rng.uniform(0.2, 2.0);
    s.params = RiParams(alpha, SymMatrix::isotropic(1, w));
    s.beta = rng.uniform(0.1, 0.9);
    const double len = std::abs(s.xT - s.x0);
    const double grown_first = s.P0 + s.beta * len * w;
    s.P_a = degenerate ? grown_first : grown_first * rng.uniform(0.1, 0.9);
    const double grown_second = s.P_a + (1.0 - s.beta) * len * w;
    s.P_T = grown_second * rng.uniform(0.1, 0.9);
    s.degenerate = degenerate;
    return s;
}

double single_sense_cost(const SplitSample& s) {
    const double len = std::abs(s.xT - s.x0);
    const double w = s.params.W(0, 0);
    return len + 0.5 * s.params.alpha *
                     (std::log2(s.P0 + len * w) - std::log2(s.P_T));
}

}  // namespace

CheckResult check_split_optimality(int n_tuples, std::uint64_t seed) {
    Rng rng(seed);
    double worst = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int i = 0; i < n_tuples; ++i) {
        const bool degenerate = i % 16 == 0;
        const SplitSample s = random_split(rng, degenerate);
        const double split = oracle::split_cost_1d(s.x0, s.P0, s.xT, s.P_T, s.beta,
                                                   s.P_a, s.params);
        const double single = single_sense_cost(s);
        const double deficit = single - split;  // must be <= 0
        worst = std::max(worst, deficit);
        if (deficit > 1e-9) ++violations;
        if (degenerate && std::abs(split - single) > 1e-9) ++violations;
        if (!degenerate && split - single <= 1e-9) ++violations;
    }
    return {"appendix3-split-ge-single", violations == 0, worst,
            std::to_string(violations) + " violations, worst deficit " +
                fmt("%.3e", worst)};
}

CheckResult check_triangle_1d(int n_tuples, std::uint64_t seed) {
    Rng rng(seed);
    double worst = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int i = 0; i < n_tuples; ++i) {
        const SplitSample s = random_split(rng, false);
        const UncertainState z1(Vec{s.x0}, SymMatrix::diag({s.P0}));
        const UncertainState z2(Vec{s.xT}, SymMatrix::diag({s.P_T}));
        const UncertainState zi(Vec{s.x0 + s.beta * (s.xT - s.x0)},
                                SymMatrix::diag({s.P_a}));
        const double direct = ri_distance(z1, z2, s.params);
        const double via = ri_distance(z1, zi, s.params) + ri_distance(zi, z2, s.params);
        const double gap = direct - via;  // triangle inequality: <= 0
        worst = std::max(worst, gap);
        if (gap > 1e-9) ++violations;
    }
    return {"move-and-sense-triangle-1d", violations == 0, worst,
            std::to_string(violations) + " violations, worst excess " +
                fmt("%.3e", worst)};
}

CheckResult check_integral_vs_sup(int n_paths, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    int violations = 0;
    for (int i = 0; i < n_paths; ++i) {
        const int d = 1 + i % 2;
        const double T = rng.uniform(0.5, 2.0);
        const double v0 = rng.uniform(0.5, 1.5);
        const double v1 = rng.uniform(0.0, 1.0);
        const double om = rng.uniform(0.5, 3.0);
        Vec origin(d), dir(d);
        for (int k = 0; k < d; ++k) origin[k] = rng.uniform(-1.0, 1.0);
        double nrm = 0.0;
        for (int k = 0; k < d; ++k) {
            dir[k] = rng.uniform(-1.0, 1.0);
            nrm += dir[k] * dir[k];
        }
        nrm = std::sqrt(nrm);
        if (nrm < 0.1) {
            dir[0] = 1.0;
            nrm = 1.0;
        }
        for (int k = 0; k < d; ++k) dir[k] /= nrm;

        const SymMatrix W = random_spd(rng, d, 0.3, 1.5);
        const SymMatrix P0 = random_spd(rng, d, 0.3, 2.0);
        const double alpha = (i % 3 == 0) ? 0.0 : rng.uniform(0.3, 1.5);
        const RiParams params(alpha, W);

        // speed v(t) = v0 + v1 sin^2(om t); arclen in closed form.
        auto speed = [=](double t) {
            const double s = std::sin(om * t);
            return v0 + v1 * s * s;
        };
        auto arclen = [=](double t) {
            return v0 * t + v1 * (0.5 * t - std::sin(2.0 * om * t) / (4.0 * om));
        };

        const double total_len = arclen(T);
        double eta = rng.uniform(-0.3, 0.95);
        const double eta_floor =
            -0.9 * min_eigenvalue(P0) / (total_len * max_singular(W));
        eta = std::max(eta, eta_floor);

        auto xf = [=](double t) { return origin + dir * arclen(t); };
        auto dxf = [=](double t) { return dir * speed(t); };
        auto Pf = [=](double t) { return P0 + W * (eta * arclen(t)); };
        auto dPf = [=](double t) { return W * (eta * speed(t)); };

        SmoothPath smooth{xf, dxf, Pf, dPf};
        const double integral = path_cost_integral(smooth, T, params, 1024);
        PathFn fn = [&](double t) { return UncertainState(xf(t), Pf(t)); };
        const double sup = path_cost_sup(fn, T, params, 3e-6);

        const double rel = std::abs(integral - sup) / std::max(std::abs(integral), 1e-9);
        worst = std::max(worst, rel);
        if (rel > 1e-4) ++violations;
    }
    return {"integral-vs-partition-sup", violations == 0, worst,
            std::to_string(violations) + " violations, worst relative gap " +
                fmt("%.3e", worst)};
}

bool run_verify(std::ostream& os, double perturb_dinfo) {
    const CheckResult checks[] = {
        check_dinfo_gate(1000, 20250101, perturb_dinfo),
        check_lemma1_supnorm_le_tvnorm(10000, 20250102),
        check_lemma2_lipschitz(10000, 20250103),
        check_theorem1_tv_perturbation(1000, 20250104),
        check_split_optimality(10000, 20250105),
        check_triangle_1d(10000, 20250106),
    };
    bool all = true;
    for (const CheckResult& c : checks) {
        os << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.detail
           << "\n";
        all = all && c.pass;
    }
    return all;
}

}  // namespace ri
