#pragma once

#include <cmath>
#include <vector>

#include "mahlerlab/convex2d.hpp"
#include "mahlerlab/errors.hpp"
#include "mahlerlab/numkit.hpp"

// The deformation functional F_K(x, xi) = vp((K° + xi)° + x) for planar
// bodies, together with its analytic first and second variation at the
// origin and finite-difference oracles for both.

namespace mahlerlab {

inline constexpr int kPlaneDim = 2; // n in the general formulas below

/// Relative criticality threshold: ||jac|| <= kCriticalityTol * (n+1) * vp,
/// i.e. both barycenters within kCriticalityTol of the origin.
inline constexpr double kCriticalityTol = 1e-8;

/// Default finite-difference steps, scaled by the body's coordinate size.
inline double default_first_order_step(const Polygon& k) { return 1e-5 * k.scale(); }
inline double default_second_order_step(const Polygon& k) { return 1e-4 * k.scale(); }

/// F_K(x, xi). Throws OutOfDomain when (x, xi) leaves the neighbourhood on
/// which the functional is defined (origin-interiority is checked after each
/// translation rather than precomputing the neighbourhood).
inline double eval_F(const Polygon& k, Vec2 x, Vec2 xi) {
    Polygon polar_shifted = translate(polar(k), xi);
    if (!contains_origin_interior(polar_shifted))
        throw OutOfDomain("xi moves the origin out of the polar body");
    Polygon body = translate(polar(polar_shifted), x);
    if (!contains_origin_interior(body))
        throw OutOfDomain("x moves the origin out of the deformed body");
    return volume_product(body);
}

struct JacobianReport {
    Vec2 body_barycenter;  // G_K
    Vec2 polar_barycenter; // G_{K°}
    double vp = 0.0;
    VecN jac{4}; // row (-(n+1) vp) * (G_{K°}, G_K) in (x, xi) coordinates
    bool is_critical = false;
};

/// First variation of F_K at the origin: -(n+1) vp(K) (G_{K°}  G_K).
inline JacobianReport jacobian_analytic(const Polygon& k) {
    const Moments mk = moments(k);
    const Moments mp = moments(polar(k));
    JacobianReport r;
    r.body_barycenter = mk.barycenter;
    r.polar_barycenter = mp.barycenter;
    r.vp = mk.area * mp.area;
    const double f = -(kPlaneDim + 1) * r.vp;
    r.jac = VecN{f * mp.barycenter.x, f * mp.barycenter.y, f * mk.barycenter.x,
                 f * mk.barycenter.y};
    r.is_critical = r.jac.norm() <= kCriticalityTol * (kPlaneDim + 1) * r.vp;
    return r;
}

/// Central differences of F_K over the four coordinates (x1, x2, xi1, xi2).
inline VecN jacobian_fd(const Polygon& k, double step) {
    VecN g(4);
    for (int i = 0; i < 4; ++i) {
        double z[4] = {0.0, 0.0, 0.0, 0.0};
        z[i] = step;
        const double fp = eval_F(k, {z[0], z[1]}, {z[2], z[3]});
        z[i] = -step;
        const double fm = eval_F(k, {z[0], z[1]}, {z[2], z[3]});
        g[i] = (fp - fm) / (2.0 * step);
    }
    return g;
}

struct HessianDetFormula {
    double corrected = 0.0; // ((n+1) vp)^{2n} det((n+2)^2 cov(K°) cov(K) - I)
    double unsquared = 0.0; // ((n+1) vp)^n variant; kept for comparison reports
};

/// Determinant identity for the block Hessian. The scalar (n+1) vp multiplies
/// a 2n x 2n matrix, so the prefactor that reproduces the direct determinant
/// is ((n+1) vp)^{2n}; the n-th power variant is reported alongside it.
inline HessianDetFormula hessian_det_formula(double vp, const SymMatrix& cov_polar,
                                             const SymMatrix& cov_body, int n) {
    if (cov_polar.dim() != n || cov_body.dim() != n)
        throw BadDimension("covariance dimensions must match n");
    const double c = static_cast<double>((n + 2) * (n + 2));
    const Mat inner = c * (cov_polar.to_mat() * cov_body.to_mat()) - Mat::identity(n);
    const double di = det(inner);
    HessianDetFormula out;
    out.corrected = std::pow((n + 1) * vp, 2 * n) * di;
    out.unsquared = std::pow(static_cast<double>(n + 1), n) * std::pow(vp, n) * di;
    return out;
}

/// cov(K°) >= (n+2)^{-2} cov(K)^{-1} in the sense of symmetric matrices.
inline bool covariance_inequality_check(const SymMatrix& cov_polar, const SymMatrix& cov_body, int n) {
    const double c = 1.0 / static_cast<double>((n + 2) * (n + 2));
    const SymMatrix diff = cov_polar - c * inverse(cov_body);
    const Definiteness d = psd_check(diff, 1e-9);
    return d == Definiteness::PositiveDefinite || d == Definiteness::PositiveSemiDefinite;
}

struct HessianReport {
    SymMatrix hess{4}; // (n+1) vp [[ (n+2) cov(K°), -I ], [ -I, (n+2) cov(K) ]]
    std::vector<double> eigenvalues;
    double det_direct = 0.0;
    double det_formula = 0.0;       // corrected identity
    double det_formula_unsquared = 0.0; // literal prefactor, for the comparison report
    Definiteness classification = Definiteness::Indefinite;
    bool covariance_inequality_holds = false;
};

/// Second variation at a critical origin. Requires criticality (the block
/// formula is only valid there); covariances are taken as inertia/area of
/// the near-centered bodies.
inline HessianReport hessian_analytic(const Polygon& k) {
    const JacobianReport jr = jacobian_analytic(k);
    if (!jr.is_critical)
        throw NotCritical("Hessian formula requires a critical body (G_K = G_K° = 0)");

    const Moments mk = moments(k);
    const Moments mp = moments(polar(k));
    const SymMatrix cov_body = (1.0 / mk.area) * mk.inertia;
    const SymMatrix cov_polar = (1.0 / mp.area) * mp.inertia;

    const double f = (kPlaneDim + 1) * jr.vp;
    const double c = kPlaneDim + 2;
    HessianReport r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            r.hess.set(i, j, f * c * cov_polar.at(i, j));
            r.hess.set(2 + i, 2 + j, f * c * cov_body.at(i, j));
        }
    r.hess.set(0, 2, -f);
    r.hess.set(1, 3, -f);

    for (const auto& e : sym_eigen(r.hess)) r.eigenvalues.push_back(e.value);
    r.det_direct = det(r.hess);
    const HessianDetFormula df = hessian_det_formula(jr.vp, cov_polar, cov_body, kPlaneDim);
    r.det_formula = df.corrected;
    r.det_formula_unsquared = df.unsquared;
    r.classification = psd_check(r.hess, 1e-9);
    r.covariance_inequality_holds = r.classification == Definiteness::PositiveDefinite ||
                       r.classification == Definiteness::PositiveSemiDefinite;
    return r;
}

/// Symmetric second-difference stencil for the full 4x4 Hessian.
inline SymMatrix hessian_fd(const Polygon& k, double step) {
    auto F = [&](double a, double b, double c, double d) {
        return eval_F(k, {a, b}, {c, d});
    };
    const double f0 = F(0, 0, 0, 0);
    SymMatrix h(4);
    for (int i = 0; i < 4; ++i) {
        double z[4] = {0, 0, 0, 0};
        z[i] = step;
        const double fp = F(z[0], z[1], z[2], z[3]);
        z[i] = -step;
        const double fm = F(z[0], z[1], z[2], z[3]);
        h.set(i, i, (fp - 2.0 * f0 + fm) / (step * step));
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            double z[4] = {0, 0, 0, 0};
            auto eval = [&](double si, double sj) {
                z[i] = si * step;
                z[j] = sj * step;
                const double v = F(z[0], z[1], z[2], z[3]);
                z[i] = 0;
                z[j] = 0;
                return v;
            };
            const double v = (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) /
                             (4.0 * step * step);
            h.set(i, j, v);
        }
    return h;
}

struct SantaloCheck {
    double lhs = 0.0; // central difference of |(K - t v)°| at t = 0
    double rhs = 0.0; // (n+1) |K°| <G_{K°}, v>
};

/// Variational formula for the polar volume under translations of the body.
inline SantaloCheck santalo_derivative_check(const Polygon& k, Vec2 v, double step) {
    auto polar_volume = [&](double t) {
        try {
            return area(polar(translate(k, -t * v)));
        } catch (const OriginNotInterior&) {
            throw OutOfDomain("translation stencil leaves the admissible neighbourhood");
        }
    };
    SantaloCheck c;
    c.lhs = (polar_volume(step) - polar_volume(-step)) / (2.0 * step);
    const Moments mp = moments(polar(k));
    c.rhs = (kPlaneDim + 1) * mp.area * dot(mp.barycenter, v);
    return c;
}

} // namespace mahlerlab
