#include "ri/matnum.hpp"

#include <algorithm>
#include <cmath>

namespace ri {

SymMatrix SymMatrix::from_rows(int n, const double* rows, double asym_tol) {
    SymMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double a = rows[i * n + j];
            double b = rows[j * n + i];
            if (std::abs(a - b) > asym_tol * (1.0 + std::abs(a)))
                throw InvalidInputError("SymMatrix::from_rows: entries not symmetric");
            r.set(i, j, 0.5 * (a + b));
        }
    }
    return r;
}

double SymMatrix::frobenius() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
}

double SymMatrix::quad_form(const Vec& x) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) s += x[i] * (*this)(i, j) * x[j];
    return s;
}

bool SymMatrix::finite() const {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (!std::isfinite((*this)(i, j))) return false;
    return true;
}

namespace {

double offdiag_mass(const double a[kMaxDim][kMaxDim], int n) {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) s += a[p][q] * a[p][q];
    return std::sqrt(2.0 * s);
}

}  // namespace

EigResult sym_eig(const SymMatrix& s) {
    if (!s.finite()) throw InvalidInputError("sym_eig: non-finite entries");
    const int n = s.dim();

    double a[kMaxDim][kMaxDim];
    double v[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a[i][j] = s(i, j);
            v[i][j] = (i == j) ? 1.0 : 0.0;
        }

    const double scale = std::max(1.0, s.frobenius());
    const double thresh = 1e-12 * scale;

    for (int sweep = 0; sweep < 64 && offdiag_mass(a, n) > thresh; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) <= 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                const double tau = sn / (1.0 + c);

                const double apq = a[p][q];
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a[r][p], arq = a[r][q];
                        a[r][p] = a[p][r] = arp - sn * (arq + tau * arp);
                        a[r][q] = a[q][r] = arq + sn * (arp - tau * arq);
                    }
                    const double vrp = v[r][p], vrq = v[r][q];
                    v[r][p] = vrp - sn * (vrq + tau * vrp);
                    v[r][q] = vrq + sn * (vrp - tau * vrq);
                }
            }
        }
    }

    int order[kMaxDim];
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order, order + n, [&](int x, int y) { return a[x][x] < a[y][y]; });

    EigResult res;
    res.dim = n;
    res.vectors = Mat(n);
    for (int j = 0; j < n; ++j) {
        res.values[j] = a[order[j]][order[j]];
        for (int i = 0; i < n; ++i) res.vectors(i, j) = v[i][order[j]];
    }
    return res;
}

SymMatrix rebuild_from_eig(const EigResult& e, const double* mapped_values) {
    const int n = e.dim;
    SymMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += e.vectors(i, k) * mapped_values[k] * e.vectors(j, k);
            r.set(i, j, s);
        }
    }
    return r;
}

SymMatrix psd_sqrt(const SymMatrix& s) {
    EigResult e = sym_eig(s);
    const double tol = tol_psd(s);
    double mapped[kMaxDim];
    for (int i = 0; i < e.dim; ++i) {
        if (e.values[i] < -tol) throw NotPsdError("psd_sqrt: matrix is not PSD");
        mapped[i] = std::sqrt(std::max(0.0, e.values[i]));
    }
    return rebuild_from_eig(e, mapped);
}

void gen_eigvals(const SymMatrix& a, const SymMatrix& b, double* out) {
    if (a.dim() != b.dim()) throw InvalidInputError("gen_eigvals: dimension mismatch");
    if (!a.finite() || !b.finite()) throw InvalidInputError("gen_eigvals: non-finite entries");
    EigResult eb = sym_eig(b);
    if (eb.values[0] <= 0.0) throw NotPdError("gen_eigvals: B is not PD");
    double inv_sqrt[kMaxDim];
    for (int i = 0; i < eb.dim; ++i) inv_sqrt[i] = 1.0 / std::sqrt(eb.values[i]);
    const SymMatrix w = rebuild_from_eig(eb, inv_sqrt);

    // M = W * A * W, symmetrized against roundoff.
    const int n = a.dim();
    double wa[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += w(i, k) * a(k, j);
            wa[i][j] = s;
        }
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += wa[i][k] * w(k, j);
            double s2 = 0.0;
            for (int k = 0; k < n; ++k) s2 += wa[j][k] * w(k, i);
            m.set(i, j, 0.5 * (s + s2));
        }

    EigResult em = sym_eig(m);
    for (int i = 0; i < n; ++i) out[i] = em.values[i];
}

double max_singular(const SymMatrix& s) {
    if (!s.finite()) throw InvalidInputError("max_singular: non-finite entries");
    EigResult e = sym_eig(s);
    double m = 0.0;
    for (int i = 0; i < e.dim; ++i) m = std::max(m, std::abs(e.values[i]));
    return m;
}

double tol_psd(const SymMatrix& s) { return 1e-9 * (1.0 + max_singular(s)); }

double min_eigenvalue(const SymMatrix& s) { return sym_eig(s).values[0]; }

bool is_psd(const SymMatrix& s) { return min_eigenvalue(s) >= -tol_psd(s); }

bool is_pd(const SymMatrix& s) { return min_eigenvalue(s) > 0.0; }

}  // namespace ri
