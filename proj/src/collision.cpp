#include "ri/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

namespace ri {

namespace {

double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

Vec apply_sym(const SymMatrix& s, const Vec& v) {
    Vec r(v.dim());
    for (int i = 0; i < v.dim(); ++i) {
        double acc = 0.0;
        for (int j = 0; j < v.dim(); ++j) acc += s(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

double dist_point_segment(double px, double py, double ax, double ay, double bx,
                          double by) {
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
    const double qx = ax + t * dx - px, qy = ay + t * dy - py;
    return std::sqrt(qx * qx + qy * qy);
}

/// Distance from a point to a convex CCW polygon; 0 if the point is inside.
double dist_point_convex_polygon(const Vec& c, const std::vector<Vec>& verts) {
    const size_t n = verts.size();
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        const Vec& a = verts[i];
        const Vec& b = verts[(i + 1) % n];
        if (cross2(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]) < 0.0)
            inside = false;
        best = std::min(best, dist_point_segment(c[0], c[1], a[0], a[1], b[0], b[1]));
    }
    return inside ? 0.0 : best;
}

}  // namespace

Obstacle Obstacle::box(Vec lo, Vec hi) {
    if (lo.dim() != hi.dim()) throw ValidationError("obstacle box: dimension mismatch");
    for (int i = 0; i < lo.dim(); ++i)
        if (!(lo[i] < hi[i])) throw ValidationError("obstacle box: lo must be < hi");
    Obstacle o;
    o.kind = Kind::Box;
    o.lo = lo;
    o.hi = hi;
    return o;
}

Obstacle Obstacle::polygon(std::vector<Vec> verts) {
    if (verts.size() < 3 || verts.size() > 64)
        throw ValidationError("obstacle polygon: need 3..64 vertices");
    for (const Vec& v : verts)
        if (v.dim() != 2) throw ValidationError("obstacle polygon: vertices must be 2-D");
    double area2 = 0.0;
    double scale = 0.0;
    const size_t n = verts.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec& a = verts[i];
        const Vec& b = verts[(i + 1) % n];
        area2 += cross2(a[0], a[1], b[0], b[1]);
        scale = std::max({scale, std::abs(a[0]), std::abs(a[1])});
    }
    if (!(area2 > 0.0))
        throw ValidationError("obstacle polygon: vertices must be CCW with area > 0");
    for (size_t i = 0; i < n; ++i) {
        const Vec& a = verts[i];
        const Vec& b = verts[(i + 1) % n];
        const Vec& c = verts[(i + 2) % n];
        if (cross2(b[0] - a[0], b[1] - a[1], c[0] - b[0], c[1] - b[1]) <
            -1e-12 * (1.0 + scale * scale))
            throw ValidationError("obstacle polygon: not convex");
    }
    Obstacle o;
    o.kind = Kind::Polygon;
    o.verts = std::move(verts);
    return o;
}

double chi2_cdf(double x, int dof) {
    if (x <= 0.0) return 0.0;
    boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::cdf(dist, x);
}

double chi2_quantile(double p, int dof) {
    if (!(p > 0.0 && p < 1.0))
        throw InvalidInputError("chi2_quantile: confidence must be in (0,1)");
    boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::quantile(dist, p);
}

ChiSquare ChiSquare::from_confidence(double confidence, int dof) {
    ChiSquare c;
    c.confidence = confidence;
    c.value = chi2_quantile(confidence, dof);
    return c;
}

ChiSquare ChiSquare::from_value(double value, int dof) {
    if (!(value > 0.0)) throw InvalidInputError("ChiSquare: value must be > 0");
    ChiSquare c;
    c.value = value;
    c.confidence = chi2_cdf(value, dof);
    return c;
}

ChiSquare ChiSquare::checked(double value, double confidence, int dof) {
    ChiSquare c = from_confidence(confidence, dof);
    if (std::abs(c.value - value) > 1e-6)
        throw ValidationError("ChiSquare: value inconsistent with confidence");
    c.value = value;
    return c;
}

double mahalanobis_sq_to_box(const Vec& x, const SymMatrix& P, const Vec& lo,
                             const Vec& hi) {
    const int d = x.dim();
    EigResult e = sym_eig(P);
    if (e.values[0] <= 0.0) throw NotPdError("mahalanobis_sq_to_box: P not PD");
    double inv[kMaxDim];
    for (int i = 0; i < d; ++i) inv[i] = 1.0 / e.values[i];
    const SymMatrix A = rebuild_from_eig(e, inv);

    // Enumerate active-set patterns: each coordinate free, at lo, or at hi.
    int npat = 1;
    for (int i = 0; i < d; ++i) npat *= 3;
    double best = std::numeric_limits<double>::infinity();
    for (int pat = 0; pat < npat; ++pat) {
        int code[kMaxDim];
        int p = pat;
        for (int i = 0; i < d; ++i) {
            code[i] = p % 3;  // 0 free, 1 lo, 2 hi
            p /= 3;
        }
        Vec y(d);
        int free_idx[kMaxDim];
        int nf = 0;
        for (int i = 0; i < d; ++i) {
            if (code[i] == 0)
                free_idx[nf++] = i;
            else
                y[i] = (code[i] == 1) ? lo[i] : hi[i];
        }
        if (nf > 0) {
            // Solve A_FF (y_F - x_F) = -A_FB (y_B - x_B) by Gaussian elimination.
            double m[kMaxDim][kMaxDim + 1];
            for (int r = 0; r < nf; ++r) {
                const int i = free_idx[r];
                double rhs = 0.0;
                for (int jj = 0; jj < d; ++jj)
                    if (code[jj] != 0) rhs -= A(i, jj) * (y[jj] - x[jj]);
                for (int c = 0; c < nf; ++c) m[r][c] = A(i, free_idx[c]);
                m[r][nf] = rhs;
            }
            bool singular = false;
            for (int c = 0; c < nf && !singular; ++c) {
                int piv = c;
                for (int r = c + 1; r < nf; ++r)
                    if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
                if (std::abs(m[piv][c]) < 1e-300) {
                    singular = true;
                    break;
                }
                std::swap_ranges(m[c], m[c] + nf + 1, m[piv]);
                for (int r = c + 1; r < nf; ++r) {
                    const double f = m[r][c] / m[c][c];
                    for (int cc = c; cc <= nf; ++cc) m[r][cc] -= f * m[c][cc];
                }
            }
            if (singular) continue;
            double sol[kMaxDim];
            for (int r = nf - 1; r >= 0; --r) {
                double s = m[r][nf];
                for (int c = r + 1; c < nf; ++c) s -= m[r][c] * sol[c];
                sol[r] = s / m[r][r];
            }
            bool feasible = true;
            for (int r = 0; r < nf; ++r) {
                const int i = free_idx[r];
                y[i] = x[i] + sol[r];
                if (y[i] < lo[i] - 1e-12 || y[i] > hi[i] + 1e-12) feasible = false;
            }
            if (!feasible) continue;
        }
        const Vec diff = y - x;
        best = std::min(best, A.quad_form(diff));
    }
    return best;
}

bool state_clear(const Vec& x, const SymMatrix& P, double chi2,
                 const std::vector<Obstacle>& obstacles, const Rect& bounds) {
    const int d = x.dim();
    if (P.dim() != d || bounds.dim() != d)
        throw InvalidInputError("state_clear: dimension mismatch");
    if (!(chi2 > 0.0)) throw InvalidInputError("state_clear: chi2 must be > 0");
    EigResult e = sym_eig(P);
    if (e.values[0] <= 0.0) throw NotPdError("state_clear: P not PD");

    // Workspace faces: the whitened unit ball fits the half-plane n.y <= b
    // iff n.x + sqrt(chi2 * n^T P n) <= b; for axis faces n^T P n = P_ii.
    for (int i = 0; i < d; ++i) {
        const double r = std::sqrt(chi2 * P(i, i));
        if (x[i] - r < bounds.lo[i] || x[i] + r > bounds.hi[i]) return false;
    }

    if (obstacles.empty()) return true;

    if (d == 1) {
        const double r = std::sqrt(chi2 * P(0, 0));
        for (const Obstacle& o : obstacles) {
            if (o.kind != Obstacle::Kind::Box)
                throw InvalidInputError("state_clear: 1-D obstacles must be intervals");
            if (x[0] + r > o.lo[0] && x[0] - r < o.hi[0]) return false;
        }
        return true;
    }

    // Whitening map: A = (1/sqrt(chi2)) P^{-1/2}.
    double mapped[kMaxDim];
    const double inv_sqrt_chi2 = 1.0 / std::sqrt(chi2);
    for (int i = 0; i < d; ++i) mapped[i] = inv_sqrt_chi2 / std::sqrt(e.values[i]);
    const SymMatrix A = rebuild_from_eig(e, mapped);
    const Vec c = apply_sym(A, x);

    for (const Obstacle& o : obstacles) {
        if (d == 2) {
            std::vector<Vec> verts;
            if (o.kind == Obstacle::Kind::Box) {
                verts = {Vec{o.lo[0], o.lo[1]}, Vec{o.hi[0], o.lo[1]},
                         Vec{o.hi[0], o.hi[1]}, Vec{o.lo[0], o.hi[1]}};
            } else {
                verts = o.verts;
            }
            for (Vec& v : verts) v = apply_sym(A, v);
            if (dist_point_convex_polygon(c, verts) < 1.0) return false;
        } else {
            if (o.kind != Obstacle::Kind::Box)
                throw InvalidInputError("state_clear: d=3 obstacles must be boxes");
            if (mahalanobis_sq_to_box(x, P, o.lo, o.hi) < chi2) return false;
        }
    }
    return true;
}

bool transition_clear(const UncertainState& z_from, const UncertainState& z_to,
                      const RiParams& params, double chi2,
                      const std::vector<Obstacle>& obstacles, const Rect& bounds,
                      double ds) {
    if (z_from.dim() != z_to.dim())
        throw InvalidInputError("transition_clear: dimension mismatch");
    if (!(ds > 0.0)) throw InvalidInputError("transition_clear: ds must be > 0");

    if (!state_clear(z_from.x, z_from.P, chi2, obstacles, bounds)) return false;

    const double len = d_cont(z_from.x, z_to.x);
    const Vec delta = z_to.x - z_from.x;
    for (double s = ds; s < len; s += ds) {
        const Vec xs = z_from.x + delta * (s / len);
        if (!state_clear(xs, propagate(z_from.P, s, params.W), chi2, obstacles, bounds))
            return false;
    }
    if (!state_clear(z_to.x, propagate(z_from.P, len, params.W), chi2, obstacles,
                     bounds))
        return false;
    return state_clear(z_to.x, z_to.P, chi2, obstacles, bounds);
}

}  // namespace ri
