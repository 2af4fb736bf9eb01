#ifndef SGF_BRIDGE_HPP
#define SGF_BRIDGE_HPP

// Bridge between C^1 forms on R^2 and the Dirichlet-form module on the
// harmonic gasket: pi omega = sum_i phi^i (x) (omega_i o Phi), the seminorm
// ||omega||_Z^2 = sum_w nu(K_w) omega(p_w)^T Z(w) omega(p_w), and the
// adjoint pi* with per-cell coefficients Z(w) u(w). Cell representative
// points are frame barycenters.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "sgf/cotangent.hpp"
#include "sgf/zfield.hpp"

namespace sgf {

// sum_i phi^i (x) omega_i with cell-wise-constant coefficients (omega_1, omega_2).
struct SimpleTensorField {
    int level = 0;
    std::vector<Eigen::Vector2d> coeff;  // one pair per level cell, base-3 indexed

    static SimpleTensorField zero(int level) {
        return {level, std::vector<Eigen::Vector2d>(static_cast<size_t>(pow3(level)),
                                                    Eigen::Vector2d::Zero())};
    }
};

// <a(x)b, c(x)d>_H via the per-cell Gamma matrices: sum_w nu(w) u(w)^T Z(w) v(w).
inline double h_inner(const SimpleTensorField& u, const SimpleTensorField& v,
                      const ZField& zf) {
    if (u.level != v.level || u.level != zf.level())
        throw domain_error("h_inner: level mismatch");
    double acc = 0.0;
    for (std::int64_t c = 0; c < zf.cell_count(); ++c) {
        const int i = static_cast<int>(c);
        acc += zf.nu(i) * u.coeff[static_cast<size_t>(c)].dot(zf.z(i) * v.coeff[static_cast<size_t>(c)]);
    }
    return acc;
}

inline Eigen::VectorXd to_vecx(const Eigen::Vector2d& p) {
    Eigen::VectorXd v(2);
    v << p.x(), p.y();
    return v;
}

// Discrete pi: sample each coefficient at the cell barycenters.
inline SimpleTensorField pi_map(const Form1& omega, const ZField& zf) {
    if (omega.dim() != 2) throw domain_error("pi_map: expected a 1-form on R^2");
    SimpleTensorField u;
    u.level = zf.level();
    u.coeff.resize(static_cast<size_t>(zf.cell_count()));
    for (std::int64_t c = 0; c < zf.cell_count(); ++c) {
        const Eigen::VectorXd w = omega.eval(to_vecx(zf.barycenter(static_cast<int>(c))));
        u.coeff[static_cast<size_t>(c)] = Eigen::Vector2d(w[0], w[1]);
    }
    return u;
}

inline double z_seminorm_sq(const Form1& omega, const ZField& zf) {
    const SimpleTensorField u = pi_map(omega, zf);
    return h_inner(u, u, zf);
}

inline double z_seminorm(const Form1& omega, const ZField& zf) {
    return std::sqrt(std::max(0.0, z_seminorm_sq(omega, zf)));
}

// pi* of a simple tensor field: cell-wise coefficients Z(w) u(w).
inline SimpleTensorField pi_star(const SimpleTensorField& u, const ZField& zf) {
    if (u.level != zf.level()) throw domain_error("pi_star: level mismatch");
    SimpleTensorField out;
    out.level = u.level;
    out.coeff.resize(u.coeff.size());
    for (std::int64_t c = 0; c < zf.cell_count(); ++c)
        out.coeff[static_cast<size_t>(c)] = zf.z(static_cast<int>(c)) * u.coeff[static_cast<size_t>(c)];
    return out;
}

// |<pi omega, u>_H - <omega, pi* u>_{L2(nu)}|; zero at the discrete level for
// cell-wise-constant omega, sampling error otherwise.
inline double adjointness_residual(const Form1& omega, const SimpleTensorField& u,
                                   const ZField& zf) {
    const double lhs = h_inner(pi_map(omega, zf), u, zf);
    const SimpleTensorField eta = pi_star(u, zf);
    double rhs = 0.0;
    for (std::int64_t c = 0; c < zf.cell_count(); ++c) {
        const Eigen::VectorXd w = omega.eval(to_vecx(zf.barycenter(static_cast<int>(c))));
        rhs += zf.nu(static_cast<int>(c)) *
               (w[0] * eta.coeff[static_cast<size_t>(c)].x() +
                w[1] * eta.coeff[static_cast<size_t>(c)].y());
    }
    return std::abs(lhs - rhs);
}

// Lift a cell-wise-constant field to a finer level (copy to descendants).
inline SimpleTensorField lift_field(const SimpleTensorField& u, int fine_level) {
    if (fine_level < u.level) throw domain_error("lift_field: target level is coarser");
    SimpleTensorField out = SimpleTensorField::zero(fine_level);
    const std::int64_t stride = pow3(fine_level - u.level);
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(out.coeff.size()); ++c)
        out.coeff[static_cast<size_t>(c)] = u.coeff[static_cast<size_t>(c / stride)];
    return out;
}

// Residual with both pairings evaluated against a finer reference field:
// <pi omega, u>_H via the reference Z, against the L2(nu) pairing of omega
// with pi* u taken at u's own level. The gap is driven by the cell-averaged
// Z at u's level versus the reference, so it shrinks as u's level
// approaches the reference level and vanishes when they coincide.
inline double adjointness_residual(const Form1& omega, const SimpleTensorField& u,
                                   const ZField& zf_u, const ZField& zf_ref) {
    const SimpleTensorField u_ref = lift_field(u, zf_ref.level());
    const double lhs = h_inner(pi_map(omega, zf_ref), u_ref, zf_ref);
    const SimpleTensorField eta_ref = lift_field(pi_star(u, zf_u), zf_ref.level());
    double rhs = 0.0;
    for (std::int64_t c = 0; c < zf_ref.cell_count(); ++c) {
        const Eigen::VectorXd w = omega.eval(to_vecx(zf_ref.barycenter(static_cast<int>(c))));
        rhs += zf_ref.nu(static_cast<int>(c)) *
               (w[0] * eta_ref.coeff[static_cast<size_t>(c)].x() +
                w[1] * eta_ref.coeff[static_cast<size_t>(c)].y());
    }
    return std::abs(lhs - rhs);
}

// nu-weighted quadrature at cell barycenters, for l2_inner on SG_Phi.
inline QuadratureMeasure kusuoka_quadrature(const ZField& zf) {
    QuadratureMeasure q;
    q.points.reserve(static_cast<size_t>(zf.cell_count()));
    q.weights.reserve(static_cast<size_t>(zf.cell_count()));
    for (std::int64_t c = 0; c < zf.cell_count(); ++c) {
        q.points.push_back(to_vecx(zf.barycenter(static_cast<int>(c))));
        q.weights.push_back(zf.nu(static_cast<int>(c)));
    }
    return q;
}

}  // namespace sgf

#endif
