#pragma once

#include <array>
#include <initializer_list>

#include "ri/vec.hpp"

namespace ri {

/// Dense d x d matrix, d <= kMaxDim. Used for eigenvector bases and whitening maps.
class Mat {
public:
    Mat() : n_(0), m_{} {}
    explicit Mat(int n) : n_(n), m_{} {
        if (n < 0 || n > kMaxDim) throw InvalidInputError("Mat: dimension out of range");
    }
    static Mat identity(int n) {
        Mat r(n);
        for (int i = 0; i < n; ++i) r(i, i) = 1.0;
        return r;
    }

    int dim() const { return n_; }
    double operator()(int i, int j) const { return m_[i * kMaxDim + j]; }
    double& operator()(int i, int j) { return m_[i * kMaxDim + j]; }

    Vec apply(const Vec& x) const {
        Vec r(n_);
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
            r[i] = s;
        }
        return r;
    }

private:
    int n_;
    std::array<double, kMaxDim * kMaxDim> m_;
};

/// Symmetric d x d matrix; symmetry is enforced on every write.
class SymMatrix {
public:
    SymMatrix() : n_(0), m_{} {}
    explicit SymMatrix(int n) : n_(n), m_{} {
        if (n <= 0 || n > kMaxDim) throw InvalidInputError("SymMatrix: dimension out of range");
    }

    static SymMatrix identity(int n) {
        SymMatrix r(n);
        for (int i = 0; i < n; ++i) r.set(i, i, 1.0);
        return r;
    }
    static SymMatrix isotropic(int n, double c) {
        SymMatrix r(n);
        for (int i = 0; i < n; ++i) r.set(i, i, c);
        return r;
    }
    static SymMatrix diag(std::initializer_list<double> d) {
        SymMatrix r(static_cast<int>(d.size()));
        int i = 0;
        for (double v : d) {
            r.set(i, i, v);
            ++i;
        }
        return r;
    }
    /// From row-major entries; off-diagonal pairs must match to within `asym_tol`.
    static SymMatrix from_rows(int n, const double* rows, double asym_tol = 1e-12);

    int dim() const { return n_; }
    double operator()(int i, int j) const { return m_[i * kMaxDim + j]; }
    void set(int i, int j, double v) {
        m_[i * kMaxDim + j] = v;
        m_[j * kMaxDim + i] = v;
    }

    SymMatrix operator+(const SymMatrix& o) const {
        SymMatrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) r.set(i, j, (*this)(i, j) + o(i, j));
        return r;
    }
    SymMatrix operator-(const SymMatrix& o) const {
        SymMatrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) r.set(i, j, (*this)(i, j) - o(i, j));
        return r;
    }
    SymMatrix operator*(double c) const {
        SymMatrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) r.set(i, j, (*this)(i, j) * c);
        return r;
    }

    double frobenius() const;
    double quad_form(const Vec& x) const;  // x^T S x
    bool finite() const;

    bool operator==(const SymMatrix& o) const {
        if (n_ != o.n_) return false;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if ((*this)(i, j) != o(i, j)) return false;
        return true;
    }

private:
    int n_;
    std::array<double, kMaxDim * kMaxDim> m_;
};

inline SymMatrix operator*(double c, const SymMatrix& s) { return s * c; }

struct EigResult {
    int dim = 0;
    std::array<double, kMaxDim> values{};  // ascending
    Mat vectors;                           // column j is the eigenvector of values[j]
};

/// Cyclic Jacobi eigendecomposition: S = V diag(values) V^T, values ascending,
/// V orthonormal. Converges when the off-diagonal Frobenius mass drops below
/// 1e-12 relative to the matrix scale.
EigResult sym_eig(const SymMatrix& s);

/// Symmetric PSD square root: R with R*R = S. Negative eigenvalues below
/// -tol_psd(S) are rejected; small negatives are clamped to zero.
SymMatrix psd_sqrt(const SymMatrix& s);

/// Eigenvalues (ascending) of the pencil (A, B), i.e. of B^{-1/2} A B^{-1/2}.
/// B must be PD.
void gen_eigvals(const SymMatrix& a, const SymMatrix& b, double* out);

/// Largest singular value of a symmetric matrix: max |lambda_i|.
double max_singular(const SymMatrix& s);

/// PSD/PD decision tolerance, scaled to the matrix: 1e-9 * (1 + max_singular).
double tol_psd(const SymMatrix& s);

bool is_psd(const SymMatrix& s);
bool is_pd(const SymMatrix& s);

double min_eigenvalue(const SymMatrix& s);

/// V f(lambda) V^T rebuilt from an eigendecomposition with mapped eigenvalues.
SymMatrix rebuild_from_eig(const EigResult& e, const double* mapped_values);

inline constexpr double kRelTolEig = 1e-9;

}  // namespace ri
