#pragma once

#include <vector>

#include "ri/ricost.hpp"

namespace ri {

/// Axis-aligned workspace box; its faces count as obstacles.
struct Rect {
    Vec lo;
    Vec hi;

    int dim() const { return lo.dim(); }
    double diagonal() const { return (hi - lo).norm(); }
};

/// Convex obstacle: an axis-aligned box (any d <= 3) or a convex CCW polygon
/// (d = 2 only, at most 64 vertices, positive area).
struct Obstacle {
    enum class Kind { Box, Polygon };
    Kind kind = Kind::Box;
    Vec lo, hi;              // Box
    std::vector<Vec> verts;  // Polygon, CCW

    static Obstacle box(Vec lo, Vec hi);
    static Obstacle polygon(std::vector<Vec> verts);
};

/// Chi-squared clearance threshold paired with the confidence it encodes
/// for d degrees of freedom.
struct ChiSquare {
    double value = 0.0;
    double confidence = 0.0;

    static ChiSquare from_confidence(double confidence, int dof);
    static ChiSquare from_value(double value, int dof);
    /// Both given: cross-checked to 1e-6.
    static ChiSquare checked(double value, double confidence, int dof);
};

double chi2_cdf(double x, int dof);
double chi2_quantile(double p, int dof);

/// True iff the confidence ellipse {y : (y-x)^T P^{-1} (y-x) <= chi2}
/// avoids every obstacle and stays inside the workspace box. Whitens by
/// (1/sqrt(chi2)) P^{-1/2} and tests unit-ball distance to each transformed
/// obstacle; bounds become half-plane constraints in the whitened frame.
bool state_clear(const Vec& x, const SymMatrix& P, double chi2,
                 const std::vector<Obstacle>& obstacles, const Rect& bounds);

/// Clearance of a move-and-sense transition: the start state, stepped
/// intermediate states (x interpolated, covariance grown by s*W), the
/// pre-measurement arrival state, and the post-measurement state.
bool transition_clear(const UncertainState& z_from, const UncertainState& z_to,
                      const RiParams& params, double chi2,
                      const std::vector<Obstacle>& obstacles, const Rect& bounds,
                      double ds);

/// Smallest squared Mahalanobis distance (metric P^{-1}) from x to the box
/// [lo, hi], solved exactly by active-set enumeration.
double mahalanobis_sq_to_box(const Vec& x, const SymMatrix& P, const Vec& lo,
                             const Vec& hi);

}  // namespace ri
