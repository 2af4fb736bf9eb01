#ifndef SGF_CHART_HPP
#define SGF_CHART_HPP

// Harmonic coordinates Phi = (phi1, phi2) and the harmonic gasket SG_Phi.
// Boundary normalization: phi1 = (0, 1, 1/2), phi2 = (0, 0, sqrt(3)/2), so
// Phi fixes the outer corners of the standard triangle.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "sgf/dirichlet.hpp"
#include "sgf/gasket.hpp"

namespace sgf {

inline const BoundaryTriple& phi1_boundary() {
    static const BoundaryTriple b{0.0, 1.0, 0.5};
    return b;
}

inline const BoundaryTriple& phi2_boundary() {
    static const BoundaryTriple b{0.0, 0.0, LevelGraph::kSqrt3 / 2.0};
    return b;
}

// A_i maps a cell's boundary triple to sub-cell i's boundary triple.
inline std::array<Eigen::Matrix3d, 3> extension_matrices() {
    std::array<Eigen::Matrix3d, 3> mats;
    for (int sub = 0; sub < 3; ++sub) {
        for (int basis = 0; basis < 3; ++basis) {
            BoundaryTriple e{0.0, 0.0, 0.0};
            e[static_cast<size_t>(basis)] = 1.0;
            const BoundaryTriple col = restrict_to_subcell(e, sub);
            for (int row = 0; row < 3; ++row)
                mats[static_cast<size_t>(sub)](row, basis) = col[static_cast<size_t>(row)];
        }
    }
    return mats;
}

using CellFrame = std::array<Eigen::Vector2d, 3>;  // Phi-images of a cell's corners

// Phi-images of the corners of K_w, by iterated restriction of the
// coordinate boundary triples (outermost letter first).
inline CellFrame cell_frame(const Address& w) {
    const BoundaryTriple t1 = restrict_to_cell(phi1_boundary(), w);
    const BoundaryTriple t2 = restrict_to_cell(phi2_boundary(), w);
    CellFrame f;
    for (int i = 0; i < 3; ++i)
        f[static_cast<size_t>(i)] =
            Eigen::Vector2d(t1[static_cast<size_t>(i)], t2[static_cast<size_t>(i)]);
    return f;
}

inline Eigen::Vector2d frame_barycenter(const CellFrame& f) {
    return (f[0] + f[1] + f[2]) / 3.0;
}

struct HarmonicChart {
    LevelGraph graph;
    PiecewiseHarmonic phi1;
    PiecewiseHarmonic phi2;

    int level() const { return graph.level(); }

    Eigen::Vector2d point(VertexId v) const {
        return {phi1.at(v), phi2.at(v)};
    }

    // Phi-image of a vertex of a coarser-level graph, matched by coordinate.
    Eigen::Vector2d point_of(const LevelGraph& coarse, VertexId v) const {
        const VertexId here =
            graph.find_vertex(coarse.lattice_points()[static_cast<size_t>(v)], coarse.level());
        if (here < 0) throw domain_error("vertex is not part of this chart's graph");
        return point(here);
    }
};

inline HarmonicChart build_chart(int m, int max_level = kDefaultMaxLevel) {
    LevelGraph g = LevelGraph::build(m, max_level);
    PiecewiseHarmonic p1 = extend_to_level(phi1_boundary(), g);
    PiecewiseHarmonic p2 = extend_to_level(phi2_boundary(), g);
    return HarmonicChart{std::move(g), std::move(p1), std::move(p2)};
}

}  // namespace sgf

#endif
