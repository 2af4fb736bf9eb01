#ifndef SGF_METRIC_HPP
#define SGF_METRIC_HPP

// Heuristic estimates of the intrinsic metric rho_nu on the harmonic gasket.
// The discrete program: maximize f(x) - f(y) over vertex potentials f that
// are affine on each harmonic-cell triangle, subject to g_w^T Z(w) g_w <= 1
// for every cell's affine gradient g_w. Solved by alternating projected
// subgradient steps; every iterate yields a feasible value by rescaling, and
// a Dijkstra bound with per-cell Z^{-1} edge weights caps the optimum from
// above. All outputs are estimates of the discrete program, not proven
// bounds on rho_nu itself.

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "sgf/chart.hpp"
#include "sgf/paths.hpp"
#include "sgf/zfield.hpp"

namespace sgf {

struct MetricEstimate {
    double lower = 0.0;
    double upper = 0.0;
    int level = 0;
};

struct MetricSolverConfig {
    int max_iters = 20000;
    double feas_tol = 1e-8;
    double ascent_step0 = 0.1;
};

// Precomputed per-cell data for the affine-per-cell program at one level.
class MetricContext {
public:
    static MetricContext build(int m, int max_level = kDefaultMaxLevel) {
        MetricContext ctx;
        ctx.chart_ = build_chart(m, max_level);
        const std::int64_t n = pow3(m);
        ctx.minv_.resize(static_cast<size_t>(n));
        ctx.z_.resize(static_cast<size_t>(n));
        ctx.zinv_.resize(static_cast<size_t>(n));
        for (std::int64_t c = 0; c < n; ++c) {
            const Address w = index_to_address(static_cast<int>(c), m);
            const CellFrame f = cell_frame(w);
            Eigen::Matrix2d edge_mat;
            edge_mat.row(0) = (f[1] - f[0]).transpose();
            edge_mat.row(1) = (f[2] - f[0]).transpose();
            const double det = edge_mat.determinant();
            if (std::abs(det) < 1e-300)
                throw domain_error("degenerate harmonic cell frame at '" + w + "'");
            ctx.minv_[static_cast<size_t>(c)] = edge_mat.inverse();
            ctx.z_[static_cast<size_t>(c)] = z_matrix(w);
            ctx.zinv_[static_cast<size_t>(c)] = ctx.z_[static_cast<size_t>(c)].inverse();
        }
        return ctx;
    }

    int level() const { return chart_.level(); }
    const LevelGraph& graph() const { return chart_.graph; }
    const HarmonicChart& chart() const { return chart_; }

    // Affine gradient of the potential on cell c.
    Eigen::Vector2d cell_gradient(const std::vector<double>& f, int c) const {
        const auto& corners = chart_.graph.cell(c);
        const Eigen::Vector2d r(f[static_cast<size_t>(corners[1])] - f[static_cast<size_t>(corners[0])],
                                f[static_cast<size_t>(corners[2])] - f[static_cast<size_t>(corners[0])]);
        return minv_[static_cast<size_t>(c)] * r;
    }

    // max_w sqrt(g_w^T Z(w) g_w), with the argmax cell.
    double constraint_sup(const std::vector<double>& f, int* argmax = nullptr) const {
        double worst = 0.0;
        int worst_cell = 0;
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(z_.size()); ++c) {
            const Eigen::Vector2d g = cell_gradient(f, static_cast<int>(c));
            const double q = g.dot(z_[static_cast<size_t>(c)] * g);
            if (q > worst) {
                worst = q;
                worst_cell = static_cast<int>(c);
            }
        }
        if (argmax) *argmax = worst_cell;
        return std::sqrt(worst);
    }

    const Eigen::Matrix2d& minv(int c) const { return minv_[static_cast<size_t>(c)]; }
    const Eigen::Matrix2d& z(int c) const { return z_[static_cast<size_t>(c)]; }
    const Eigen::Matrix2d& zinv(int c) const { return zinv_[static_cast<size_t>(c)]; }

private:
    HarmonicChart chart_;
    std::vector<Eigen::Matrix2d> minv_;
    std::vector<Eigen::Matrix2d> z_;
    std::vector<Eigen::Matrix2d> zinv_;
};

namespace detail {

// Shortest path with edge weight sqrt(d^T Z(w)^{-1} d) for the Phi-image
// displacement d of an edge of cell w. Any feasible potential changes by at
// most this much along the edge, so the result bounds the program optimum.
inline double dijkstra_upper(const MetricContext& ctx, VertexId x, VertexId y) {
    const LevelGraph& g = ctx.graph();
    const int n = g.vertex_count();
    std::vector<std::vector<std::pair<int, double>>> adj(static_cast<size_t>(n));
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(g.cell_count()); ++c) {
        const auto& corners = g.cell(static_cast<int>(c));
        const Address w = index_to_address(static_cast<int>(c), g.level());
        const CellFrame f = cell_frame(w);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const Eigen::Vector2d d = f[static_cast<size_t>(j)] - f[static_cast<size_t>(i)];
                const double wt = std::sqrt(d.dot(ctx.zinv(static_cast<int>(c)) * d));
                adj[static_cast<size_t>(corners[static_cast<size_t>(i)])].emplace_back(
                    corners[static_cast<size_t>(j)], wt);
                adj[static_cast<size_t>(corners[static_cast<size_t>(j)])].emplace_back(
                    corners[static_cast<size_t>(i)], wt);
            }
    }
    std::vector<double> dist(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[static_cast<size_t>(x)] = 0.0;
    heap.emplace(0.0, x);
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[static_cast<size_t>(v)]) continue;
        if (v == y) break;
        for (const auto& [u, wt] : adj[static_cast<size_t>(v)]) {
            const double nd = d + wt;
            if (nd < dist[static_cast<size_t>(u)]) {
                dist[static_cast<size_t>(u)] = nd;
                heap.emplace(nd, u);
            }
        }
    }
    return dist[static_cast<size_t>(y)];
}

}  // namespace detail

// Best feasible value of the discrete program for rho_nu(x, y).
inline MetricEstimate intrinsic_estimate(const MetricContext& ctx, VertexId x, VertexId y,
                                         const MetricSolverConfig& cfg = {}) {
    MetricEstimate est;
    est.level = ctx.level();
    if (x == y) return est;
    const LevelGraph& g = ctx.graph();
    const int n = g.vertex_count();

    // Start from the linear potential along the chord direction; its cell
    // gradients all equal the unit chord vector, so it is feasible.
    const Eigen::Vector2d chord = ctx.chart().point(x) - ctx.chart().point(y);
    const Eigen::Vector2d u = chord.normalized();
    std::vector<double> f(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) f[static_cast<size_t>(v)] = u.dot(ctx.chart().point(v));

    // One Polyak projection step against a single violated cell constraint.
    auto project_cell = [&](int c, double h) {
        const auto& corners = g.cell(c);
        const Eigen::Vector2d grad = ctx.cell_gradient(f, c);
        const Eigen::Vector2d dr = ctx.minv(c).transpose() * (ctx.z(c) * grad) / h;
        const double g0 = -(dr.x() + dr.y());
        const double norm_sq = g0 * g0 + dr.x() * dr.x() + dr.y() * dr.y();
        const double step = (h - 1.0) / std::max(norm_sq, 1e-300);
        f[static_cast<size_t>(corners[0])] -= step * g0;
        f[static_cast<size_t>(corners[1])] -= step * dr.x();
        f[static_cast<size_t>(corners[2])] -= step * dr.y();
    };

    double best = 0.0;
    const std::int64_t cells = static_cast<std::int64_t>(g.cell_count());
    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        const double h = ctx.constraint_sup(f);
        if (h > 0.0)
            best = std::max(best, (f[static_cast<size_t>(x)] - f[static_cast<size_t>(y)]) / h);

        if (h <= 1.0 + cfg.feas_tol) {
            // feasible: plain ascent on the objective
            const double step = cfg.ascent_step0 / std::sqrt(static_cast<double>(iter));
            f[static_cast<size_t>(x)] += step;
            f[static_cast<size_t>(y)] -= step;
        } else {
            // infeasible: one cyclic sweep of Polyak steps over violated cells
            for (std::int64_t c = 0; c < cells; ++c) {
                const Eigen::Vector2d grad = ctx.cell_gradient(f, static_cast<int>(c));
                const double q = grad.dot(ctx.z(static_cast<int>(c)) * grad);
                if (q > 1.0 + cfg.feas_tol)
                    project_cell(static_cast<int>(c), std::sqrt(q));
            }
        }
    }
    est.lower = best;
    est.upper = detail::dijkstra_upper(ctx, x, y);
    if (!(est.lower <= est.upper + 1e-9))
        throw solver_error("intrinsic metric estimate: lower exceeded upper bound", best);
    return est;
}

inline double intrinsic_lower_bound(const MetricContext& ctx, VertexId x, VertexId y,
                                    const MetricSolverConfig& cfg = {}) {
    return intrinsic_estimate(ctx, x, y, cfg).lower;
}

// Sum of intrinsic estimates over consecutive path vertices, evaluated in a
// finer solver context. Lower-style estimator of L_nu.
inline double mu_length(const EdgePath& p, const LevelGraph& path_graph,
                        const MetricContext& ctx, const MetricSolverConfig& cfg = {}) {
    if (p.level != path_graph.level()) throw domain_error("mu_length: path level mismatch");
    double total = 0.0;
    for (size_t i = 0; i + 1 < p.vertices.size(); ++i) {
        const VertexId a = ctx.graph().find_vertex(
            path_graph.lattice_points()[static_cast<size_t>(p.vertices[i])], p.level);
        const VertexId b = ctx.graph().find_vertex(
            path_graph.lattice_points()[static_cast<size_t>(p.vertices[i + 1])], p.level);
        if (a < 0 || b < 0) throw domain_error("mu_length: path vertex missing in solver graph");
        total += intrinsic_lower_bound(ctx, a, b, cfg);
    }
    return total;
}

}  // namespace sgf

#endif
