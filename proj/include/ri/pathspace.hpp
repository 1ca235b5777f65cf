#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "ri/ricost.hpp"

namespace ri {

struct PathSample {
    double t;
    UncertainState state;
};

/// Finite sequence of timestamped uncertain states with strictly increasing
/// times, t_0 = 0. Piecewise-linear interpolation in both x and P is the
/// canonical continuous extension (P stays PD along segments between PD
/// endpoints).
class PiecewisePath {
public:
    explicit PiecewisePath(std::vector<PathSample> samples);

    const std::vector<PathSample>& samples() const { return samples_; }
    int dim() const { return samples_.front().state.dim(); }
    double duration() const { return samples_.back().t; }

    UncertainState at(double t) const;

private:
    std::vector<PathSample> samples_;
};

using PathFn = std::function<UncertainState(double)>;

/// Differentiable path with analytic derivatives, for the integral form.
struct SmoothPath {
    std::function<Vec(double)> x;
    std::function<Vec(double)> dx;
    std::function<SymMatrix(double)> P;
    std::function<SymMatrix(double)> dP;
};

/// Sum of ri_distance over consecutive samples.
double path_cost_partition(const PiecewisePath& path, const RiParams& params);

/// Supremum of partition sums, approximated on dyadic partitions of [0, T]
/// doubled until successive values agree to rel_tol (relative). Refinement
/// cannot decrease the sum; this is asserted with 1e-9 slack. Throws
/// NonConvergenceError past 2^22 segments.
double path_cost_sup(const PathFn& fn, double T, const RiParams& params,
                     double rel_tol);

/// Composite-Simpson quadrature of
///   ||dx|| + (alpha/2) log2(e) Tr((||dx|| W - dP) P^{-1})
/// over [0, T] with n_quad panels. Requires ||dx(t)|| W - dP(t) PSD at
/// every quadrature node (throws NotMonotoneGrowthError otherwise).
double path_cost_integral(const SmoothPath& path, double T, const RiParams& params,
                          int n_quad = 1024);

/// V(gamma; P) over the path's own breakpoints:
/// ||x(0)|| + max_sv(P(0)) + sum_k [ ||dx_k|| + max_sv(dP_k) ].
double variation(const PiecewisePath& path);

/// Total variation norm; for piecewise-linear paths the supremum over
/// partitions is attained at the breakpoints.
double tv_norm(const PiecewisePath& path);

/// sup_t ||x(t)|| + max_sv(P(t)); per-segment convexity makes the breakpoint
/// maximum exact for piecewise-linear paths.
double sup_norm(const PiecewisePath& path);

/// Per-term split of the partition cost: total = euclid + alpha * bits
/// up to floating-point reassociation.
struct PathDecomposition {
    double euclid = 0.0;
    double bits = 0.0;
};
PathDecomposition decompose_path(const PiecewisePath& path, const RiParams& params);

/// CSV schema: t, x_1..x_d, vech(P) in lower-triangle column order.
void write_path_csv(std::ostream& os, const PiecewisePath& path);
PiecewisePath read_path_csv(std::istream& is, int dim);

}  // namespace ri
