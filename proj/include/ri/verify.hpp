#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ri/oracle.hpp"

namespace ri {

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;  // worst signed violation; <= 0 means clean
    std::string detail;
};

/// Closed-form information cost against the numeric max-det reference on
/// seeded random PD pairs for d = 1..3. `perturb` shifts the closed form and
/// exists so the gate can be shown to fail.
CheckResult check_dinfo_gate(int pairs_per_dim, std::uint64_t seed,
                             double perturb = 0.0);

/// sup_norm <= tv_norm on random piecewise-linear paths, d <= 3.
CheckResult check_lemma1_supnorm_le_tvnorm(int n_paths, std::uint64_t seed);

/// 1-D Lipschitz-style bound with eps = 0.5, delta = 0.25,
/// L = max(1 + log2(e)/eps, log2(e)/eps^2), alpha = W = 1.
CheckResult check_lemma2_lipschitz(int n_tuples, std::uint64_t seed);

/// TV-perturbation probe: |c(gamma') - c(gamma)| <= L (1 + |gamma|_TV) delta
/// for perturbations with |gamma' - gamma|_TV < delta, evaluated on common
/// refinement partitions.
CheckResult check_theorem1_tv_perturbation(int n_pairs, std::uint64_t seed);

/// Two-sense 1-D paths never beat the single-sense move: split cost >= the
/// analytic single-sense cost, equality only in the degenerate split.
CheckResult check_split_optimality(int n_tuples, std::uint64_t seed);

/// Same content routed through ri_distance: the 1-D triangle inequality on
/// intermediate states built by the two-sense construction.
CheckResult check_triangle_1d(int n_tuples, std::uint64_t seed);

/// Integral form versus the partition-sum supremum on random smooth paths
/// obeying the covariance growth precondition; 1e-4 relative agreement.
CheckResult check_integral_vs_sup(int n_paths, std::uint64_t seed);

/// Runs the oracle gates with fixed seeds, one line per check. True iff all
/// pass; `perturb_dinfo` feeds the gate's negative-control hook.
bool run_verify(std::ostream& os, double perturb_dinfo = 0.0);

}  // namespace ri
