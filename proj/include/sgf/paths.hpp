#ifndef SGF_PATHS_HPP
#define SGF_PATHS_HPP

// Rectifiable curves in SG as chains of level-m edges (each a genuine line
// segment of the gasket), their Phi-images, midpoint-rule line integrals of
// 1-forms, and Euclidean lengths of the image polylines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "sgf/chart.hpp"
#include "sgf/cotangent.hpp"
#include "sgf/gasket.hpp"

namespace sgf {

struct EdgePath {
    int level = 0;
    std::vector<VertexId> vertices;
};

inline EdgePath make_path(const LevelGraph& g, std::vector<VertexId> vertices) {
    if (vertices.empty()) throw domain_error("path must contain at least one vertex");
    for (size_t i = 0; i + 1 < vertices.size(); ++i)
        if (!g.adjacent(vertices[i], vertices[i + 1]))
            throw domain_error("path vertices " + std::to_string(i) + " and " +
                               std::to_string(i + 1) + " are not adjacent");
    return {g.level(), std::move(vertices)};
}

// Replace each level-m edge by its 2^k collinear level-(m+k) sub-edges.
inline EdgePath refine_path(const EdgePath& p, const LevelGraph& coarse,
                            const LevelGraph& fine) {
    const int k = fine.level() - coarse.level();
    if (p.level != coarse.level() || k < 0)
        throw domain_error("refine_path: graph levels do not match the path");
    EdgePath out;
    out.level = fine.level();
    const std::int64_t steps = std::int64_t{1} << k;
    const auto& pts = coarse.lattice_points();
    out.vertices.push_back(fine.find_vertex(pts[static_cast<size_t>(p.vertices[0])], coarse.level()));
    for (size_t i = 0; i + 1 < p.vertices.size(); ++i) {
        const LatticePoint a = pts[static_cast<size_t>(p.vertices[i])];
        const LatticePoint b = pts[static_cast<size_t>(p.vertices[i + 1])];
        // a,b at coarse scale; fine scale multiplies by 2^k, so the j-th
        // subdivision point is a*2^k + j*(b-a), all integer.
        const std::int64_t sf = std::int64_t{1} << k;
        for (std::int64_t j = 1; j <= steps; ++j) {
            const LatticePoint q{a.x * sf + j * (b.x - a.x), a.y * sf + j * (b.y - a.y)};
            const VertexId v = fine.find_vertex(q, fine.level());
            if (v < 0) throw domain_error("refine_path: subdivision point is not a vertex");
            out.vertices.push_back(v);
        }
    }
    return out;
}

struct PathIntegralResult {
    double value = 0.0;
    int refinement_level = 0;
    double estimated_error = 0.0;
};

namespace detail {

// Phi-image polyline of the path refined k extra levels, read off the chart.
inline std::vector<Eigen::Vector2d> image_polyline(const EdgePath& p, const LevelGraph& g,
                                                   const HarmonicChart& chart, int k) {
    if (p.level + k > chart.level())
        throw domain_error("chart level is too coarse for the requested refinement");
    const std::int64_t steps = std::int64_t{1} << k;
    // lattice scale factor from path level up to chart level
    const std::int64_t to_chart = std::int64_t{1} << (chart.level() - p.level);
    const std::int64_t sub = to_chart / steps;
    const auto& pts = g.lattice_points();
    std::vector<Eigen::Vector2d> out;
    auto phi_at = [&](const LatticePoint& q) {
        const VertexId v = chart.graph.find_vertex(q, chart.level());
        if (v < 0) throw domain_error("image_polyline: point is not a chart vertex");
        return chart.point(v);
    };
    const LatticePoint first = pts[static_cast<size_t>(p.vertices[0])];
    out.push_back(phi_at({first.x * to_chart, first.y * to_chart}));
    for (size_t i = 0; i + 1 < p.vertices.size(); ++i) {
        const LatticePoint a = pts[static_cast<size_t>(p.vertices[i])];
        const LatticePoint b = pts[static_cast<size_t>(p.vertices[i + 1])];
        for (std::int64_t j = 1; j <= steps; ++j) {
            const LatticePoint q{a.x * to_chart + j * sub * (b.x - a.x),
                                 a.y * to_chart + j * sub * (b.y - a.y)};
            out.push_back(phi_at(q));
        }
    }
    return out;
}

// Terms are computed in a canonical per-segment orientation and summed in a
// canonical order, so reversing the path negates the result bit-exactly.
inline double midpoint_sum(const Form1& omega, const std::vector<Eigen::Vector2d>& poly) {
    struct Term {
        double kx, ky, value;
        double sign;
    };
    std::vector<Term> terms;
    terms.reserve(poly.size());
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        Eigen::Vector2d a = poly[i], b = poly[i + 1];
        double sign = 1.0;
        if (std::make_pair(b.x(), b.y()) < std::make_pair(a.x(), a.y())) {
            std::swap(a, b);
            sign = -1.0;
        }
        const Eigen::Vector2d mid = 0.5 * (a + b);
        const Eigen::VectorXd w = omega.eval((Eigen::VectorXd(2) << mid.x(), mid.y()).finished());
        const Eigen::Vector2d d = b - a;
        terms.push_back({mid.x(), mid.y(), w[0] * d.x() + w[1] * d.y(), sign});
    }
    std::sort(terms.begin(), terms.end(), [](const Term& s, const Term& t) {
        return std::tie(s.kx, s.ky, s.value) < std::tie(t.kx, t.ky, t.value);
    });
    double acc = 0.0;
    for (const Term& t : terms) acc += t.sign * t.value;
    return acc;
}

}  // namespace detail

inline PathIntegralResult integrate_form(const Form1& omega, const EdgePath& p,
                                         const LevelGraph& g, const HarmonicChart& chart,
                                         int k) {
    if (k < 0) throw domain_error("integrate_form: negative refinement");
    PathIntegralResult r;
    r.refinement_level = k;
    r.value = detail::midpoint_sum(omega, detail::image_polyline(p, g, chart, k));
    if (k >= 1) {
        const double prev = detail::midpoint_sum(omega, detail::image_polyline(p, g, chart, k - 1));
        r.estimated_error = std::abs(r.value - prev);
    }
    return r;
}

// Inscribed-polyline length of the Phi-image; nondecreasing in k.
inline double euclidean_length(const EdgePath& p, const LevelGraph& g,
                               const HarmonicChart& chart, int k) {
    const auto poly = detail::image_polyline(p, g, chart, k);
    double len = 0.0;
    for (size_t i = 0; i + 1 < poly.size(); ++i) len += (poly[i + 1] - poly[i]).norm();
    return len;
}

}  // namespace sgf

#endif
