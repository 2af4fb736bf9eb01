#ifndef SGF_DIRICHLET_HPP
#define SGF_DIRICHLET_HPP

// Resistance form on the gasket: base triangle energy, the 1/5-2/5 harmonic
// extension rule, piecewise-harmonic functions on V_m, and renormalized
// graph energies E_m = (5/3)^m * sum over edges of squared differences.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "sgf/gasket.hpp"

namespace sgf {

using BoundaryTriple = std::array<double, 3>;

// B0(u,v) = sum_{i<j} (u_i - u_j)(v_i - v_j)
inline double base_energy(const BoundaryTriple& u, const BoundaryTriple& v) {
    double e = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            e += (u[static_cast<size_t>(i)] - u[static_cast<size_t>(j)]) *
                 (v[static_cast<size_t>(i)] - v[static_cast<size_t>(j)]);
    return e;
}

inline double base_energy(const BoundaryTriple& u) { return base_energy(u, u); }

inline double energy_renorm(int m) { return std::pow(5.0 / 3.0, m); }

// Midpoint opposite corner k gets (2u_i + 2u_j + u_k)/5.
// Returned as the three midpoint values indexed by the opposite corner.
inline BoundaryTriple harmonic_midpoints(const BoundaryTriple& u) {
    BoundaryTriple mid;
    for (int k = 0; k < 3; ++k) {
        const double ui = u[static_cast<size_t>((k + 1) % 3)];
        const double uj = u[static_cast<size_t>((k + 2) % 3)];
        mid[static_cast<size_t>(k)] = (2.0 * ui + 2.0 * uj + u[static_cast<size_t>(k)]) / 5.0;
    }
    return mid;
}

// Boundary triple of the harmonic function restricted to sub-cell i:
// corner i keeps its value, the other two corners are midpoints.
inline BoundaryTriple restrict_to_subcell(const BoundaryTriple& u, int sub) {
    const BoundaryTriple mid = harmonic_midpoints(u);
    BoundaryTriple out;
    for (int j = 0; j < 3; ++j)
        out[static_cast<size_t>(j)] =
            (j == sub) ? u[static_cast<size_t>(j)]
                       : mid[static_cast<size_t>(3 - sub - j)];  // midpoint opposite the third corner
    return out;
}

// Boundary triple of the harmonic function on cell K_w, from the root triple.
inline BoundaryTriple restrict_to_cell(BoundaryTriple u, const Address& w) {
    for (char c : w) u = restrict_to_subcell(u, c - '0');
    return u;
}

// A harmonic function sampled on all level-m vertices.
struct PiecewiseHarmonic {
    int level = 0;
    BoundaryTriple boundary{};
    std::vector<double> values;  // indexed by VertexId of the level graph

    double at(VertexId v) const { return values[static_cast<size_t>(v)]; }
};

inline void extend_recursive(const LevelGraph& g, const Address& w, const BoundaryTriple& u,
                             PiecewiseHarmonic& f) {
    if (static_cast<int>(w.size()) == g.level()) {
        const auto corners = g.cell(address_to_index(w));
        for (int i = 0; i < 3; ++i)
            f.values[static_cast<size_t>(corners[static_cast<size_t>(i)])] =
                u[static_cast<size_t>(i)];
        return;
    }
    for (int i = 0; i < 3; ++i)
        extend_recursive(g, w + static_cast<char>('0' + i), restrict_to_subcell(u, i), f);
}

inline PiecewiseHarmonic extend_to_level(const BoundaryTriple& u, const LevelGraph& g) {
    PiecewiseHarmonic f;
    f.level = g.level();
    f.boundary = u;
    f.values.assign(static_cast<size_t>(g.vertex_count()), 0.0);
    extend_recursive(g, Address{}, u, f);
    return f;
}

inline PiecewiseHarmonic extend_to_level(const BoundaryTriple& u, int m,
                                         int max_level = kDefaultMaxLevel) {
    return extend_to_level(u, LevelGraph::build(m, max_level));
}

inline double graph_energy(const std::vector<double>& f, const LevelGraph& g) {
    if (f.size() != static_cast<size_t>(g.vertex_count()))
        throw domain_error("graph_energy: value vector does not cover V_m");
    double e = 0.0;
    for (const auto& [a, b] : g.edges()) {
        const double d = f[static_cast<size_t>(a)] - f[static_cast<size_t>(b)];
        e += d * d;
    }
    return energy_renorm(g.level()) * e;
}

inline double graph_energy(const PiecewiseHarmonic& f, const LevelGraph& g) {
    return graph_energy(f.values, g);
}

// Max deviation from the harmonic-extension relation over all parent cells;
// zero (to rounding) iff f is harmonic.
inline double reextension_residual(const PiecewiseHarmonic& f, const LevelGraph& g) {
    double worst = 0.0;
    for (int level = 0; level < g.level(); ++level) {
        const std::int64_t n = pow3(level);
        for (std::int64_t c = 0; c < n; ++c) {
            const Address w = index_to_address(static_cast<int>(c), level);
            const auto corners = g.cell_boundary(w);
            BoundaryTriple u;
            for (int i = 0; i < 3; ++i)
                u[static_cast<size_t>(i)] = f.at(corners[static_cast<size_t>(i)]);
            for (int sub = 0; sub < 3; ++sub) {
                const BoundaryTriple expect = restrict_to_subcell(u, sub);
                const auto sc = g.cell_boundary(w + static_cast<char>('0' + sub));
                for (int i = 0; i < 3; ++i)
                    worst = std::max(worst, std::abs(f.at(sc[static_cast<size_t>(i)]) -
                                                     expect[static_cast<size_t>(i)]));
            }
        }
    }
    return worst;
}

}  // namespace sgf

#endif
