#include "ri/ricost.hpp"

#include <algorithm>
#include <cmath>

namespace ri {

UncertainState::UncertainState(Vec position, SymMatrix covariance)
    : x(position), P(covariance) {
    if (x.dim() != P.dim())
        throw InvalidInputError("UncertainState: position/covariance dimension mismatch");
    if (!x.finite() || !P.finite())
        throw InvalidInputError("UncertainState: non-finite entries");
    EigResult e = sym_eig(P);
    if (e.values[0] < kPFloor) {
        double mapped[kMaxDim];
        for (int i = 0; i < e.dim; ++i) mapped[i] = std::max(e.values[i], kPFloor);
        P = rebuild_from_eig(e, mapped);
    }
}

RiParams::RiParams(double a, SymMatrix w) : alpha(a), W(w) {
    if (!(alpha >= 0.0)) throw InvalidInputError("RiParams: alpha must be >= 0");
    if (!W.finite() || !is_pd(W)) throw NotPdError("RiParams: W must be PD");
}

bool GoalRegion::contains(const UncertainState& z) const {
    for (int i = 0; i < z.dim(); ++i)
        if (z.x[i] < x_lo[i] || z.x[i] > x_hi[i]) return false;
    return is_psd(P_max - z.P);
}

Vec GoalRegion::closest_point(const Vec& x) const {
    Vec r(x.dim());
    for (int i = 0; i < x.dim(); ++i) r[i] = std::clamp(x[i], x_lo[i], x_hi[i]);
    return r;
}

double d_cont(const Vec& x_from, const Vec& x_to) {
    if (x_from.dim() != x_to.dim())
        throw InvalidInputError("d_cont: dimension mismatch");
    return (x_to - x_from).norm();
}

SymMatrix propagate(const SymMatrix& P, double dist, const SymMatrix& W) {
    return P + W * dist;
}

double d_info(const SymMatrix& P_hat, const SymMatrix& P_next) {
    double mu[kMaxDim];
    gen_eigvals(P_next, P_hat, mu);  // rejects a non-PD prior
    double bits = 0.0;
    for (int i = 0; i < P_hat.dim(); ++i) {
        if (mu[i] <= 0.0) throw NotPdError("d_info: posterior not PD");
        // Dead band against eigensolver dust: identical covariances must cost
        // exactly zero or partition sums accumulate noise under refinement.
        if (mu[i] < 1.0 - 1e-12) bits -= 0.5 * std::log2(mu[i]);
    }
    return bits;
}

double ri_distance(const UncertainState& z_from, const UncertainState& z_to,
                   const RiParams& params) {
    const double dist = d_cont(z_from.x, z_to.x);
    if (params.alpha == 0.0) return dist;
    return dist + params.alpha * d_info(propagate(z_from.P, dist, params.W), z_to.P);
}

double goal_lower_bound(const UncertainState& z, const GoalRegion& goal,
                        const RiParams& params) {
    UncertainState target(goal.closest_point(z.x), goal.P_max);
    return ri_distance(z, target, params);
}

}  // namespace ri
