#ifndef SGF_ZFIELD_HPP
#define SGF_ZFIELD_HPP

// Per-cell energy measures Gamma(f,g)(K_w), the Kusuoka measure
// nu = Gamma(phi1) + Gamma(phi2), and the matrix field
// Z(w)_ij = Gamma(phi_i, phi_j)(K_w) / nu(K_w).
//
// For harmonic f,g the cell energy measure is exact:
// Gamma(f,g)(K_w) = (5/3)^|w| * B0(f_w, g_w).

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgf/chart.hpp"
#include "sgf/dirichlet.hpp"
#include "sgf/gasket.hpp"

namespace sgf {

struct CellMeasureTable {
    int level = 0;
    std::vector<double> entries;  // indexed by base-3 cell index

    double at(const Address& w) const {
        if (static_cast<int>(w.size()) != level)
            throw domain_error("address length does not match table level");
        return entries[static_cast<size_t>(address_to_index(w))];
    }

    double total() const {
        double s = 0.0;
        for (double e : entries) s += e;
        return s;
    }
};

using ZMatrix = Eigen::Matrix2d;

inline double lambda_max(const ZMatrix& z) {
    const double mean = 0.5 * (z(0, 0) + z(1, 1));
    const double off = 0.5 * (z(0, 0) - z(1, 1));
    return mean + std::sqrt(off * off + z(0, 1) * z(1, 0));
}

inline double lambda_min(const ZMatrix& z) {
    const double mean = 0.5 * (z(0, 0) + z(1, 1));
    const double off = 0.5 * (z(0, 0) - z(1, 1));
    return mean - std::sqrt(off * off + z(0, 1) * z(1, 0));
}

inline constexpr double kPsdTolerance = 1e-12;

// Gamma-matrix of (phi1, phi2) on K_w from the coordinate boundary triples.
inline ZMatrix cell_gamma_matrix(const Address& w) {
    const BoundaryTriple t1 = restrict_to_cell(phi1_boundary(), w);
    const BoundaryTriple t2 = restrict_to_cell(phi2_boundary(), w);
    const double r = energy_renorm(static_cast<int>(w.size()));
    ZMatrix g;
    g(0, 0) = r * base_energy(t1, t1);
    g(0, 1) = g(1, 0) = r * base_energy(t1, t2);
    g(1, 1) = r * base_energy(t2, t2);
    return g;
}

inline double kusuoka_mass(const Address& w) {
    const ZMatrix g = cell_gamma_matrix(w);
    return g(0, 0) + g(1, 1);
}

inline ZMatrix z_matrix(const Address& w) {
    const ZMatrix g = cell_gamma_matrix(w);
    const double nu = g(0, 0) + g(1, 1);
    if (!(nu > 0.0))
        throw domain_error("degenerate cell: zero Kusuoka mass on '" + w + "'");
    ZMatrix z = g / nu;
    if (lambda_min(z) < -kPsdTolerance)
        throw domain_error("Z(" + w + ") failed the PSD check; upstream inconsistency");
    return z;
}

// Energy measure of a pair of harmonic functions on the cell K_w.
inline double cell_energy_measure(const PiecewiseHarmonic& f, const PiecewiseHarmonic& g,
                                  const Address& w, const LevelGraph& graph,
                                  bool check_harmonic = true) {
    if (static_cast<int>(w.size()) > graph.level() || f.level != graph.level() ||
        g.level != graph.level())
        throw domain_error("cell_energy_measure: level mismatch");
    if (check_harmonic) {
        if (reextension_residual(f, graph) > 1e-9 || reextension_residual(g, graph) > 1e-9)
            throw domain_error("cell_energy_measure: input is not harmonic");
    }
    const auto cf = graph.cell_boundary(w);
    BoundaryTriple u, v;
    for (int i = 0; i < 3; ++i) {
        u[static_cast<size_t>(i)] = f.at(cf[static_cast<size_t>(i)]);
        v[static_cast<size_t>(i)] = g.at(cf[static_cast<size_t>(i)]);
    }
    return energy_renorm(static_cast<int>(w.size())) * base_energy(u, v);
}

inline CellMeasureTable kusuoka_table(int m, int max_level = kDefaultMaxLevel) {
    if (m > max_level)
        throw resource_limit_error("kusuoka_table: level exceeds max level");
    CellMeasureTable t;
    t.level = m;
    const std::int64_t n = pow3(m);
    t.entries.resize(static_cast<size_t>(n));
    for (std::int64_t c = 0; c < n; ++c)
        t.entries[static_cast<size_t>(c)] = kusuoka_mass(index_to_address(static_cast<int>(c), m));
    return t;
}

// Per-cell Z matrices at a fixed level, with the nu table and cell frames.
class ZField {
public:
    static ZField build(int m, int max_level = kDefaultMaxLevel) {
        if (m > max_level) throw resource_limit_error("ZField: level exceeds max level");
        ZField zf;
        zf.level_ = m;
        const std::int64_t n = pow3(m);
        zf.z_.resize(static_cast<size_t>(n));
        zf.nu_.level = m;
        zf.nu_.entries.resize(static_cast<size_t>(n));
        zf.barycenters_.resize(static_cast<size_t>(n));
        for (std::int64_t c = 0; c < n; ++c) {
            const Address w = index_to_address(static_cast<int>(c), m);
            const ZMatrix g = cell_gamma_matrix(w);
            const double nu = g(0, 0) + g(1, 1);
            if (!(nu > 0.0)) throw domain_error("degenerate cell '" + w + "'");
            zf.nu_.entries[static_cast<size_t>(c)] = nu;
            zf.z_[static_cast<size_t>(c)] = g / nu;
            if (lambda_min(zf.z_[static_cast<size_t>(c)]) < -kPsdTolerance)
                throw domain_error("Z(" + w + ") failed the PSD check");
            zf.barycenters_[static_cast<size_t>(c)] = frame_barycenter(cell_frame(w));
        }
        return zf;
    }

    int level() const { return level_; }
    std::int64_t cell_count() const { return static_cast<std::int64_t>(z_.size()); }
    const ZMatrix& z(int cell_index) const { return z_[static_cast<size_t>(cell_index)]; }
    double nu(int cell_index) const { return nu_.entries[static_cast<size_t>(cell_index)]; }
    const CellMeasureTable& nu_table() const { return nu_; }
    const Eigen::Vector2d& barycenter(int cell_index) const {
        return barycenters_[static_cast<size_t>(cell_index)];
    }

private:
    int level_ = 0;
    std::vector<ZMatrix> z_;
    CellMeasureTable nu_;
    std::vector<Eigen::Vector2d> barycenters_;
};

// Max over level-m cells of the top eigenvalue of Z(w); the trace bound
// keeps this at or below 1.
inline double c_z_bound(int m, int max_level = kDefaultMaxLevel) {
    if (m > max_level) throw resource_limit_error("c_z_bound: level exceeds max level");
    double best = 0.0;
    const std::int64_t n = pow3(m);
    for (std::int64_t c = 0; c < n; ++c)
        best = std::max(best, lambda_max(z_matrix(index_to_address(static_cast<int>(c), m))));
    return best;
}

}  // namespace sgf

#endif
