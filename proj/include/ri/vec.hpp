#pragma once

#include <array>
#include <cmath>
#include <initializer_list>

#include "ri/errors.hpp"

namespace ri {

inline constexpr int kMaxDim = 8;

/// Small fixed-capacity vector for positions in R^d, d <= kMaxDim.
class Vec {
public:
    Vec() : n_(0), v_{} {}
    explicit Vec(int n) : n_(n), v_{} {
        if (n < 0 || n > kMaxDim) throw InvalidInputError("Vec: dimension out of range");
    }
    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())), v_{} {
        if (n_ > kMaxDim) throw InvalidInputError("Vec: dimension out of range");
        int i = 0;
        for (double x : xs) v_[i++] = x;
    }

    int dim() const { return n_; }
    double operator[](int i) const { return v_[i]; }
    double& operator[](int i) { return v_[i]; }

    Vec operator+(const Vec& o) const {
        Vec r(n_);
        for (int i = 0; i < n_; ++i) r.v_[i] = v_[i] + o.v_[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r(n_);
        for (int i = 0; i < n_; ++i) r.v_[i] = v_[i] - o.v_[i];
        return r;
    }
    Vec operator*(double c) const {
        Vec r(n_);
        for (int i = 0; i < n_; ++i) r.v_[i] = v_[i] * c;
        return r;
    }

    double dot(const Vec& o) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += v_[i] * o.v_[i];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }

    bool finite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(v_[i])) return false;
        return true;
    }

    bool operator==(const Vec& o) const {
        if (n_ != o.n_) return false;
        for (int i = 0; i < n_; ++i)
            if (v_[i] != o.v_[i]) return false;
        return true;
    }

private:
    int n_;
    std::array<double, kMaxDim> v_;
};

inline Vec operator*(double c, const Vec& v) { return v * c; }

}  // namespace ri
