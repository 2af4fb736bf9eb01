#ifndef SGF_COTANGENT_HPP
#define SGF_COTANGENT_HPP

// Cotangent machinery for a closed K inside R^m given by finitely many
// constraint functions: tangent projections, quotient fiber norms, the
// algebra of (function, 1-form) pairs, and quadrature L2 inner products.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sgf/errors.hpp"

namespace sgf {

// A C^1 scalar function on R^m with an evaluable gradient.
struct ScalarField {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

inline ScalarField constant_field(double c, int dim) {
    return {[c](const Eigen::VectorXd&) { return c; },
            [dim](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(dim).eval(); }};
}

inline ScalarField field_product(const ScalarField& f, const ScalarField& g) {
    return {[f, g](const Eigen::VectorXd& p) { return f.value(p) * g.value(p); },
            [f, g](const Eigen::VectorXd& p) {
                return (f.value(p) * g.gradient(p) + g.value(p) * f.gradient(p)).eval();
            }};
}

// omega = sum_i omega_i dx^i, coefficients evaluable pointwise.
struct Form1 {
    std::vector<ScalarField> coeff;

    int dim() const { return static_cast<int>(coeff.size()); }

    Eigen::VectorXd eval(const Eigen::VectorXd& p) const {
        Eigen::VectorXd v(dim());
        for (int i = 0; i < dim(); ++i) v[i] = coeff[static_cast<size_t>(i)].value(p);
        return v;
    }
};

inline Form1 zero_form(int dim) {
    Form1 w;
    for (int i = 0; i < dim; ++i) w.coeff.push_back(constant_field(0.0, dim));
    return w;
}

// df = sum_i (d_i f) dx^i
inline Form1 differential(const ScalarField& f, int dim) {
    Form1 w;
    for (int i = 0; i < dim; ++i)
        w.coeff.push_back(
            {[f, i](const Eigen::VectorXd& p) { return f.gradient(p)[i]; },
             [dim](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(dim).eval(); }});
    return w;
}

// Generators of the vanishing ideal of K, each with a gradient.
using ConstraintSet = std::vector<ScalarField>;

struct TangentProjection {
    Eigen::VectorXd point;
    Eigen::MatrixXd matrix;  // orthogonal projector onto T_p K
};

inline constexpr double kRankTolerance = 1e-10;

// Orthogonal projector onto the null space of the constraint-gradient matrix.
inline TangentProjection tangent_projection(const ConstraintSet& constraints,
                                            const Eigen::VectorXd& p) {
    const int m = static_cast<int>(p.size());
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(m, m);
    if (!constraints.empty()) {
        Eigen::MatrixXd G(static_cast<int>(constraints.size()), m);
        for (size_t k = 0; k < constraints.size(); ++k)
            G.row(static_cast<int>(k)) = constraints[k].gradient(p).transpose();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeFullV);
        const double cutoff = kRankTolerance * svd.singularValues().maxCoeff();
        for (int k = 0; k < svd.singularValues().size(); ++k) {
            if (svd.singularValues()[k] > cutoff) {
                const Eigen::VectorXd v = svd.matrixV().col(k);
                P -= v * v.transpose();
            }
        }
    }
    return {p, std::move(P)};
}

// ||[omega]||_{T*_pK} = ||P omega(p)||
inline double quotient_norm(const Form1& omega, const TangentProjection& proj) {
    return (proj.matrix * omega.eval(proj.point)).norm();
}

// An element (f, omega) of the algebra C^1_0(U) + forms.
struct OmegaElement {
    ScalarField f;
    Form1 omega;
};

// ||(f, omega)|| = sup(|f| + sum_i |d_i f|) + sup ||omega||, both sups taken
// over the supplied sample points (a lower bound for the true sup over U).
inline double omega_norm(const OmegaElement& e, const std::vector<Eigen::VectorXd>& sample) {
    if (sample.empty()) throw domain_error("omega_norm: empty sample set");
    double c1 = 0.0, form = 0.0;
    for (const auto& p : sample) {
        c1 = std::max(c1, std::abs(e.f.value(p)) + e.f.gradient(p).cwiseAbs().sum());
        form = std::max(form, e.omega.eval(p).norm());
    }
    return c1 + form;
}

// (f1, w1)(f2, w2) = (f1 f2, f1 w2 + f2 w1)
inline OmegaElement omega_product(const OmegaElement& a, const OmegaElement& b) {
    OmegaElement out;
    out.f = field_product(a.f, b.f);
    const int dim = a.omega.dim();
    for (int i = 0; i < dim; ++i) {
        const ScalarField wa = a.omega.coeff[static_cast<size_t>(i)];
        const ScalarField wb = b.omega.coeff[static_cast<size_t>(i)];
        const ScalarField fa = a.f;
        const ScalarField fb = b.f;
        out.omega.coeff.push_back(
            {[fa, fb, wa, wb](const Eigen::VectorXd& p) {
                 return fa.value(p) * wb.value(p) + fb.value(p) * wa.value(p);
             },
             [fa, fb, wa, wb](const Eigen::VectorXd& p) {
                 return (fa.value(p) * wb.gradient(p) + wb.value(p) * fa.gradient(p) +
                         fb.value(p) * wa.gradient(p) + wa.value(p) * fb.gradient(p))
                     .eval();
             }});
    }
    return out;
}

struct QuadratureMeasure {
    std::vector<Eigen::VectorXd> points;
    std::vector<double> weights;
};

// <omega, eta> = sum_k w_k <P_k omega(p_k), P_k eta(p_k)>.
// An empty projection list means P = identity at every point.
inline double l2_inner(const Form1& omega, const Form1& eta,
                       const std::vector<Eigen::MatrixXd>& projections,
                       const QuadratureMeasure& q) {
    if (q.points.size() != q.weights.size())
        throw domain_error("l2_inner: point/weight count mismatch");
    if (!projections.empty() && projections.size() != q.points.size())
        throw domain_error("l2_inner: projection/point count mismatch");
    double acc = 0.0;
    for (size_t k = 0; k < q.points.size(); ++k) {
        Eigen::VectorXd a = omega.eval(q.points[k]);
        Eigen::VectorXd b = eta.eval(q.points[k]);
        if (!projections.empty()) {
            a = projections[k] * a;
            b = projections[k] * b;
        }
        acc += q.weights[k] * a.dot(b);
    }
    return acc;
}

}  // namespace sgf

#endif
