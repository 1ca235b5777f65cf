#include "ri/pathspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace ri {

PiecewisePath::PiecewisePath(std::vector<PathSample> samples)
    : samples_(std::move(samples)) {
    if (samples_.size() < 2)
        throw InvalidInputError("PiecewisePath: need at least 2 samples");
    if (samples_.front().t != 0.0)
        throw InvalidInputError("PiecewisePath: first timestamp must be 0");
    const int d = samples_.front().state.dim();
    for (size_t i = 0; i < samples_.size(); ++i) {
        if (samples_[i].state.dim() != d)
            throw InvalidInputError("PiecewisePath: inconsistent dimensions");
        if (i > 0 && !(samples_[i].t > samples_[i - 1].t))
            throw InvalidInputError("PiecewisePath: timestamps must be strictly increasing");
    }
}

UncertainState PiecewisePath::at(double t) const {
    if (t <= samples_.front().t) return samples_.front().state;
    if (t >= samples_.back().t) return samples_.back().state;
    size_t hi = 1;
    while (samples_[hi].t < t) ++hi;
    const PathSample& a = samples_[hi - 1];
    const PathSample& b = samples_[hi];
    const double w = (t - a.t) / (b.t - a.t);
    Vec x = a.state.x * (1.0 - w) + b.state.x * w;
    SymMatrix P = a.state.P * (1.0 - w) + b.state.P * w;
    return UncertainState(x, P);
}

double path_cost_partition(const PiecewisePath& path, const RiParams& params) {
    double total = 0.0;
    const auto& s = path.samples();
    for (size_t i = 0; i + 1 < s.size(); ++i)
        total += ri_distance(s[i].state, s[i + 1].state, params);
    return total;
}

namespace {

double partition_sum(const PathFn& fn, double T, const RiParams& params, int segments) {
    double total = 0.0;
    UncertainState prev = fn(0.0);
    for (int k = 1; k <= segments; ++k) {
        UncertainState cur = fn(T * static_cast<double>(k) / segments);
        total += ri_distance(prev, cur, params);
        prev = cur;
    }
    return total;
}

}  // namespace

double path_cost_sup(const PathFn& fn, double T, const RiParams& params,
                     double rel_tol) {
    double prev = partition_sum(fn, T, params, 1);
    for (int k = 1; k <= 22; ++k) {
        const double cur = partition_sum(fn, T, params, 1 << k);
        if (cur < prev - 1e-9)
            throw Error("path_cost_sup: partition sum decreased under refinement");
        if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-9))
            return cur;
        prev = cur;
    }
    throw NonConvergenceError("path_cost_sup: no convergence at 2^22 segments",
                              prev, partition_sum(fn, T, params, 1 << 22));
}

namespace {

double integrand_at(const SmoothPath& path, double t, const RiParams& params,
                    double log2e) {
    const Vec dx = path.dx(t);
    const double speed = dx.norm();
    if (params.alpha == 0.0) return speed;

    const SymMatrix growth = params.W * speed - path.dP(t);
    if (!is_psd(growth))
        throw NotMonotoneGrowthError(
            "path_cost_integral: ||dx|| W - dP not PSD at t=" + std::to_string(t));

    // Tr(growth * P^{-1}) via the eigendecomposition of P.
    const SymMatrix P = path.P(t);
    EigResult e = sym_eig(P);
    if (e.values[0] <= 0.0) throw NotPdError("path_cost_integral: P(t) not PD");
    double inv[kMaxDim];
    for (int i = 0; i < e.dim; ++i) inv[i] = 1.0 / e.values[i];
    const SymMatrix Pinv = rebuild_from_eig(e, inv);
    double tr = 0.0;
    for (int i = 0; i < P.dim(); ++i)
        for (int j = 0; j < P.dim(); ++j) tr += growth(i, j) * Pinv(j, i);

    return speed + 0.5 * params.alpha * log2e * tr;
}

}  // namespace

double path_cost_integral(const SmoothPath& path, double T, const RiParams& params,
                          int n_quad) {
    if (n_quad < 1) throw InvalidInputError("path_cost_integral: n_quad must be >= 1");
    const double log2e = 1.0 / std::log(2.0);
    const double h = T / n_quad;
    double total = 0.0;
    double f_left = integrand_at(path, 0.0, params, log2e);
    for (int j = 0; j < n_quad; ++j) {
        const double a = j * h;
        const double f_mid = integrand_at(path, a + 0.5 * h, params, log2e);
        const double f_right = integrand_at(path, a + h, params, log2e);
        total += h / 6.0 * (f_left + 4.0 * f_mid + f_right);
        f_left = f_right;
    }
    return total;
}

double variation(const PiecewisePath& path) {
    const auto& s = path.samples();
    double v = s.front().state.x.norm() + max_singular(s.front().state.P);
    for (size_t i = 0; i + 1 < s.size(); ++i) {
        v += (s[i + 1].state.x - s[i].state.x).norm();
        v += max_singular(s[i + 1].state.P - s[i].state.P);
    }
    return v;
}

double tv_norm(const PiecewisePath& path) { return variation(path); }

double sup_norm(const PiecewisePath& path) {
    double m = 0.0;
    for (const auto& s : path.samples())
        m = std::max(m, s.state.x.norm() + max_singular(s.state.P));
    return m;
}

PathDecomposition decompose_path(const PiecewisePath& path, const RiParams& params) {
    PathDecomposition dec;
    const auto& s = path.samples();
    for (size_t i = 0; i + 1 < s.size(); ++i) {
        const double dist = d_cont(s[i].state.x, s[i + 1].state.x);
        dec.euclid += dist;
        dec.bits += d_info(propagate(s[i].state.P, dist, params.W), s[i + 1].state.P);
    }
    return dec;
}

void write_path_csv(std::ostream& os, const PiecewisePath& path) {
    const int d = path.dim();
    os << "t";
    for (int i = 0; i < d; ++i) os << ",x" << (i + 1);
    for (int j = 0; j < d; ++j)
        for (int i = j; i < d; ++i) os << ",p" << (i + 1) << (j + 1);
    os << "\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (const auto& s : path.samples()) {
        put(s.t);
        for (int i = 0; i < d; ++i) {
            os << ",";
            put(s.state.x[i]);
        }
        for (int j = 0; j < d; ++j)
            for (int i = j; i < d; ++i) {
                os << ",";
                put(s.state.P(i, j));
            }
        os << "\n";
    }
}

PiecewisePath read_path_csv(std::istream& is, int dim) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidInputError("read_path_csv: empty input");
    std::vector<PathSample> samples;
    const int ncols = 1 + dim + dim * (dim + 1) / 2;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<double> vals;
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<int>(vals.size()) != ncols)
            throw InvalidInputError("read_path_csv: wrong column count");
        Vec x(dim);
        for (int i = 0; i < dim; ++i) x[i] = vals[1 + i];
        SymMatrix P(dim);
        int idx = 1 + dim;
        for (int j = 0; j < dim; ++j)
            for (int i = j; i < dim; ++i) P.set(i, j, vals[idx++]);
        samples.push_back({vals[0], UncertainState(x, P)});
    }
    return PiecewisePath(std::move(samples));
}

}  // namespace ri
