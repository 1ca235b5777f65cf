#include "ri/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

namespace ri::oracle {

namespace {

/// S * A * S, symmetrized.
SymMatrix congruence(const SymMatrix& s, const SymMatrix& a) {
    const int n = s.dim();
    double sa[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += s(i, k) * a(k, j);
            sa[i][j] = acc;
        }
    SymMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double acc = 0.0, acc2 = 0.0;
            for (int k = 0; k < n; ++k) {
                acc += sa[i][k] * s(k, j);
                acc2 += sa[j][k] * s(k, i);
            }
            r.set(i, j, 0.5 * (acc + acc2));
        }
    return r;
}

SymMatrix clip_eigs(const SymMatrix& q, double lo, double hi) {
    EigResult e = sym_eig(q);
    double mapped[kMaxDim];
    for (int i = 0; i < e.dim; ++i) mapped[i] = std::clamp(e.values[i], lo, hi);
    return rebuild_from_eig(e, mapped);
}

}  // namespace

double maxdet_oracle(const SymMatrix& P_hat, const SymMatrix& P_next) {
    if (!is_pd(P_hat) || !is_pd(P_next))
        throw NotPdError("maxdet_oracle: inputs must be PD");
    const int n = P_hat.dim();

    EigResult eh = sym_eig(P_hat);
    double inv_sqrt[kMaxDim];
    for (int i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(eh.values[i]);
    const SymMatrix white = rebuild_from_eig(eh, inv_sqrt);
    const SymMatrix M = congruence(white, P_next);

    const double m_min = min_eigenvalue(M);
    const double q0 = 0.5 * std::min(1.0, m_min);
    SymMatrix Q = SymMatrix::isotropic(n, q0);

    int stable = 0;
    for (int k = 1; k <= 10000; ++k) {
        EigResult eq = sym_eig(Q);
        double inv[kMaxDim];
        for (int i = 0; i < n; ++i)
            inv[i] = 1.0 / std::max(eq.values[i], 1e-300);
        const SymMatrix grad = rebuild_from_eig(eq, inv);
        SymMatrix next = Q + grad * (1.0 / k);

        // Alternating projections onto {0 <= Q <= I} and {Q <= M}.
        for (int pass = 0; pass < 2; ++pass) {
            next = clip_eigs(next, 0.0, 1.0);
            next = M - clip_eigs(M - next, 0.0,
                                 std::numeric_limits<double>::infinity());
        }
        next = clip_eigs(next, 0.0, 1.0);

        if ((next - Q).frobenius() < 1e-14)
            ++stable;
        else
            stable = 0;
        Q = next;
        if (stable >= 5) break;
    }

    EigResult eq = sym_eig(Q);
    double bits = 0.0;
    for (int i = 0; i < n; ++i)
        bits -= 0.5 * std::log2(std::max(eq.values[i], 1e-300));
    return std::max(0.0, bits);
}

GridSpec GridSpec::make(const Scenario& scn, int cells, int n_levels, double lo,
                        double hi) {
    if (n_levels < 1 || n_levels > 64)
        throw InvalidInputError("GridSpec: need 1..64 covariance levels");
    if (!(lo > 0.0 && hi >= lo)) throw InvalidInputError("GridSpec: bad level range");
    GridSpec g;
    g.cells_per_axis.assign(scn.dim, cells);
    for (int i = 0; i < n_levels; ++i) {
        const double c =
            n_levels == 1 ? lo
                          : lo * std::pow(hi / lo, static_cast<double>(i) / (n_levels - 1));
        g.cov_levels.push_back(SymMatrix::isotropic(scn.dim, c));
    }
    return g;
}

namespace {

struct GridGeometry {
    int d;
    int n[2] = {1, 1};
    double h[2] = {0.0, 0.0};
    Vec lo;

    Vec center(int cell) const {
        Vec c(d);
        c[0] = lo[0] + (cell % n[0] + 0.5) * h[0];
        if (d == 2) c[1] = lo[1] + (cell / n[0] + 0.5) * h[1];
        return c;
    }
    int cell_of(const Vec& x) const {
        int ix = std::clamp(static_cast<int>((x[0] - lo[0]) / h[0]), 0, n[0] - 1);
        if (d == 1) return ix;
        int iy = std::clamp(static_cast<int>((x[1] - lo[1]) / h[1]), 0, n[1] - 1);
        return iy * n[0] + ix;
    }
};

}  // namespace

double grid_dijkstra(const Scenario& scn, const GridSpec& grid) {
    const int d = scn.dim;
    if (d > 2) throw InvalidInputError("grid_dijkstra: only d <= 2 supported");
    const int L = static_cast<int>(grid.cov_levels.size());
    for (const SymMatrix& P : grid.cov_levels)
        if (!is_pd(P)) throw InvalidInputError("grid_dijkstra: levels must be PD");

    GridGeometry geo;
    geo.d = d;
    geo.lo = scn.bounds.lo;
    for (int i = 0; i < d; ++i) {
        geo.n[i] = grid.cells_per_axis[i];
        geo.h[i] = (scn.bounds.hi[i] - scn.bounds.lo[i]) / geo.n[i];
    }
    const int ncells = geo.n[0] * geo.n[1];

    if (!state_clear(scn.init.x, scn.init.P, scn.chi2.value, scn.obstacles,
                     scn.bounds))
        throw InfeasibleStartError("grid_dijkstra: start cell in collision");
    if (scn.goal.contains(scn.init)) return 0.0;

    // Neighbor moves: offsets and lengths (d=1: 2-neighbor, d=2: 8-neighbor).
    struct Move {
        int dx, dy, len_idx;
        double len;
    };
    std::vector<Move> moves;
    std::vector<double> lengths;
    auto add_len = [&](double v) {
        for (size_t i = 0; i < lengths.size(); ++i)
            if (lengths[i] == v) return static_cast<int>(i);
        lengths.push_back(v);
        return static_cast<int>(lengths.size() - 1);
    };
    if (d == 1) {
        moves.push_back({-1, 0, add_len(geo.h[0]), geo.h[0]});
        moves.push_back({+1, 0, add_len(geo.h[0]), geo.h[0]});
    } else {
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const double len = std::sqrt(dx * dx * geo.h[0] * geo.h[0] +
                                             dy * dy * geo.h[1] * geo.h[1]);
                moves.push_back({dx, dy, add_len(len), len});
            }
    }
    const int nlens = static_cast<int>(lengths.size());

    // Info-bit table per (level_from, move length, level_to); positions do
    // not enter the information term.
    std::vector<double> info_move(static_cast<size_t>(L) * nlens * L, 0.0);
    std::vector<double> info_stay(static_cast<size_t>(L) * L, 0.0);
    if (scn.params.alpha > 0.0) {
        for (int a = 0; a < L; ++a) {
            for (int li = 0; li < nlens; ++li) {
                const SymMatrix grown =
                    propagate(grid.cov_levels[a], lengths[li], scn.params.W);
                for (int b = 0; b < L; ++b)
                    info_move[(static_cast<size_t>(a) * nlens + li) * L + b] =
                        d_info(grown, grid.cov_levels[b]);
            }
            for (int b = 0; b < L; ++b)
                info_stay[static_cast<size_t>(a) * L + b] =
                    d_info(grid.cov_levels[a], grid.cov_levels[b]);
        }
    }

    // Lazy clearance memos. Tri-state: 0 unknown, 1 clear, 2 blocked.
    std::vector<std::uint8_t> memo_state(static_cast<size_t>(ncells) * L, 0);
    std::vector<std::uint8_t> memo_grown(static_cast<size_t>(ncells) * L * nlens, 0);
    auto level_clear = [&](int cell, int lev) {
        std::uint8_t& m = memo_state[static_cast<size_t>(cell) * L + lev];
        if (m == 0)
            m = state_clear(geo.center(cell), grid.cov_levels[lev], scn.chi2.value,
                            scn.obstacles, scn.bounds)
                    ? 1
                    : 2;
        return m == 1;
    };
    auto grown_clear = [&](int cell, int lev, int len_idx) {
        std::uint8_t& m =
            memo_grown[(static_cast<size_t>(cell) * L + lev) * nlens + len_idx];
        if (m == 0)
            m = state_clear(geo.center(cell),
                            propagate(grid.cov_levels[lev], lengths[len_idx],
                                      scn.params.W),
                            scn.chi2.value, scn.obstacles, scn.bounds)
                    ? 1
                    : 2;
        return m == 1;
    };

    std::vector<char> level_in_goal(L);
    for (int b = 0; b < L; ++b)
        level_in_goal[b] = is_psd(scn.goal.P_max - grid.cov_levels[b]) ? 1 : 0;
    auto cell_in_box = [&](int cell) {
        const Vec c = geo.center(cell);
        for (int i = 0; i < d; ++i)
            if (c[i] < scn.goal.x_lo[i] || c[i] > scn.goal.x_hi[i]) return false;
        return true;
    };

    const double inf = std::numeric_limits<double>::infinity();
    const int nstates = ncells * L;
    const int start = nstates;
    std::vector<double> dist(nstates + 1, inf);
    dist[start] = 0.0;

    using QItem = std::pair<double, int>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
    pq.push({0.0, start});

    while (!pq.empty()) {
        const auto [cost, id] = pq.top();
        pq.pop();
        if (cost > dist[id]) continue;

        if (id != start) {
            const int cell = id / L;
            const int lev = id % L;
            if (level_in_goal[lev] && cell_in_box(cell)) return cost;

            const int cx = cell % geo.n[0];
            const int cy = cell / geo.n[0];
            if (!level_clear(cell, lev)) continue;

            for (int b = 0; b < L; ++b) {
                if (b == lev) continue;
                if (!level_clear(cell, b)) continue;
                const double w =
                    scn.params.alpha * info_stay[static_cast<size_t>(lev) * L + b];
                if (cost + w < dist[cell * L + b]) {
                    dist[cell * L + b] = cost + w;
                    pq.push({cost + w, cell * L + b});
                }
            }
            for (const Move& mv : moves) {
                const int nx = cx + mv.dx;
                const int ny = cy + mv.dy;
                if (nx < 0 || nx >= geo.n[0] || ny < 0 || ny >= geo.n[1]) continue;
                const int ncell = ny * geo.n[0] + nx;
                // A move is the memoized decomposition of transition_clear at
                // step >= edge length: start state, grown arrival, sensed
                // arrival.
                if (!grown_clear(ncell, lev, mv.len_idx)) continue;
                for (int b = 0; b < L; ++b) {
                    if (!level_clear(ncell, b)) continue;
                    const double w =
                        mv.len +
                        scn.params.alpha *
                            info_move[(static_cast<size_t>(lev) * nlens + mv.len_idx) * L + b];
                    const int nid = ncell * L + b;
                    if (cost + w < dist[nid]) {
                        dist[nid] = cost + w;
                        pq.push({cost + w, nid});
                    }
                }
            }
        } else {
            // Start edges: honest transitions from the exact initial state to
            // nearby cell centers at every level.
            const int c0 = geo.cell_of(scn.init.x);
            const int cx = c0 % geo.n[0];
            const int cy = c0 / geo.n[0];
            for (int dy = (d == 2 ? -1 : 0); dy <= (d == 2 ? 1 : 0); ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = cx + dx;
                    const int ny = cy + dy;
                    if (nx < 0 || nx >= geo.n[0] || ny < 0 || ny >= geo.n[1]) continue;
                    const int ncell = ny * geo.n[0] + nx;
                    const Vec target = geo.center(ncell);
                    for (int b = 0; b < L; ++b) {
                        const UncertainState zt(target, grid.cov_levels[b]);
                        const double step =
                            std::max(1e-9, d_cont(scn.init.x, target));
                        if (!transition_clear(scn.init, zt, scn.params,
                                              scn.chi2.value, scn.obstacles,
                                              scn.bounds, step))
                            continue;
                        const double w = ri_distance(scn.init, zt, scn.params);
                        const int nid = ncell * L + b;
                        if (w < dist[nid]) {
                            dist[nid] = w;
                            pq.push({w, nid});
                        }
                    }
                }
        }
    }
    return inf;
}

double analytic_1d_optimum(double x0, double P0, const GoalRegion& goal,
                           const RiParams& params) {
    const double lo = goal.x_lo[0], hi = goal.x_hi[0];
    const double dist = std::max({0.0, lo - x0, x0 - hi});
    const double grown = P0 + dist * params.W(0, 0);
    const double pmax = goal.P_max(0, 0);
    return dist + params.alpha * std::max(0.0, 0.5 * std::log2(grown / pmax));
}

double split_cost_1d(double x0, double P0, double xT, double P_T, double beta,
                     double P_a, const RiParams& params) {
    if (!(beta > 0.0 && beta < 1.0))
        throw InvalidSplitError("split_cost_1d: beta must be in (0,1)");
    if (!(P0 > 0.0 && P_a > 0.0 && P_T > 0.0))
        throw InvalidSplitError("split_cost_1d: covariances must be positive");
    const double len = std::abs(xT - x0);
    const double w = params.W(0, 0);
    const double grown_first = P0 + beta * len * w;
    if (!(grown_first >= P_a))
        throw InvalidSplitError("split_cost_1d: first sense must shrink covariance");
    const double grown_second = P_a + (1.0 - beta) * len * w;
    if (!(grown_second >= P_T))
        throw InvalidSplitError("split_cost_1d: second sense must shrink covariance");
    return len +
           0.5 * params.alpha * (std::log2(grown_first) - std::log2(P_a)) +
           0.5 * params.alpha * (std::log2(grown_second) - std::log2(P_T));
}

}  // namespace ri::oracle
