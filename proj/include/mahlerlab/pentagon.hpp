#pragma once

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>
#include <vector>

#include "mahlerlab/convex2d.hpp"
#include "mahlerlab/errors.hpp"
#include "mahlerlab/format.hpp"
#include "mahlerlab/functional.hpp"

// The one-parameter family of axially symmetric pentagons P_{q,b} with
// vertices (-1/b, 0), (q, +-r), (b, +-c) where r = sqrt(1+q^2) and
// c = (1+bq)/sqrt(1+q^2). Along the curve f(q, b) = 1 the barycenter sits at
// the origin and the pentagon is a critical point of the volume product in
// its projective orbit; the family interpolates between an equilateral
// triangle and its dual.

namespace mahlerlab {

inline const double kPentagonQMin = -1.0 / std::sqrt(2.0);
inline const double kPentagonQMax = 1.0 / std::sqrt(2.0);
inline const double kPentagonBMin = 1.0 / std::sqrt(2.0);
inline const double kPentagonBMax = std::sqrt(2.0);

struct PentagonParams {
    double q = 0.0;
    double b = 1.0;

    PentagonParams(double q_, double b_) : q(q_), b(b_) {
        if (!(b > 0.0)) throw BadParams("pentagon requires b > 0");
        if (q < -1.0 / b - 1e-12 || q > b + 1e-12)
            throw BadParams("pentagon requires q in [-1/b, b]");
    }

    // derived quantities, recomputed on demand so they can never go stale
    double r() const { return std::sqrt(1.0 + q * q); }
    double c() const { return (1.0 + b * q) / std::sqrt(1.0 + q * q); }
};

/// The five vertices CCW; degenerate parameter choices collapse duplicated
/// or collinear vertices and yield a triangle.
inline Polygon build(const PentagonParams& p) {
    const double r = p.r(), c = p.c();
    return make_polygon({{-1.0 / p.b, 0.0},
                         {p.q, -r},
                         {p.b, -c},
                         {p.b, c},
                         {p.q, r}});
}

/// Criticality polynomial: the barycenter of P_{q,b} is the origin iff
/// f(q, b) = 1.
inline double f_criticality(double q, double b) {
    const double b2 = b * b;
    return q * q * q * b - q * q * b2 - q * q + 2.0 * q * b2 * b2 * b + q * b + 3.0 * b2 * b2;
}

struct FGrad {
    double df_dq = 0.0;
    double df_db = 0.0;
};

inline FGrad grad_f(double q, double b) {
    const double b2 = b * b;
    FGrad g;
    g.df_dq = 3.0 * b * q * q - 2.0 * (b2 + 1.0) * q + 2.0 * b2 * b2 * b + b;
    g.df_db = q * q * q - 2.0 * b * q * q + (10.0 * b2 * b2 + 1.0) * q + 12.0 * b2 * b;
    return g;
}

/// Unique b in [1/sqrt2, sqrt2] with f(q, b) = 1: bisection bracket followed
/// by a Newton polish (df/db > 0 on the strip makes both safe).
inline double solve_b(double q) {
    if (q < kPentagonQMin - 1e-12 || q > kPentagonQMax + 1e-12)
        throw OutOfRange("solve_b: q outside [-1/sqrt2, 1/sqrt2]");
    q = std::min(std::max(q, kPentagonQMin), kPentagonQMax);

    double lo = kPentagonBMin, hi = kPentagonBMax;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f_criticality(q, mid) < 1.0)
            lo = mid;
        else
            hi = mid;
    }
    double b = 0.5 * (lo + hi);
    for (int i = 0; i < 5; ++i) {
        const double g = f_criticality(q, b) - 1.0;
        if (std::abs(g) <= 1e-15) break;
        b -= g / grad_f(q, b).df_db;
        b = std::min(std::max(b, kPentagonBMin), kPentagonBMax);
    }
    return b;
}

/// db/dq along the critical curve (implicit differentiation of f = 1).
inline double curve_db_dq(double q, double b) {
    const FGrad g = grad_f(q, b);
    return -g.df_dq / g.df_db;
}

struct PentagonMoments {
    double area = 0.0;
    double ixx = 0.0;
    double iyy = 0.0; // I_xy vanishes by the axial symmetry
};

// The pentagon splits into six pairwise symmetric triangles with one vertex
// at the origin; D1, D2, D3 are the three upper-half determinants
//   D1 = det[(q, r), (-1/b, 0)] = r/b
//   D2 = det[(b, c), (q, r)]    = b r - q c
//   D3 = det[(b, 0), (b, c)]    = b c
// and the inertia weights follow from the triangle second-moment formula.
inline PentagonMoments closed_form_moments(const PentagonParams& p) {
    const double q = p.q, b = p.b, r = p.r(), c = p.c();
    const double d1 = r / b;
    const double d2 = b * r - q * c;
    const double d3 = b * c;

    const double g1 = 1.0 / (b * b) - q / b + q * q;
    const double g2 = q * q + q * b + b * b;
    const double g3 = 3.0 * b * b;
    const double h1 = r * r;
    const double h2 = r * r + r * c + c * c;
    const double h3 = c * c;

    PentagonMoments m;
    m.area = d1 + d2 + d3;
    m.ixx = (d1 * g1 + d2 * g2 + d3 * g3) / 6.0;
    m.iyy = (d1 * h1 + d2 * h2 + d3 * h3) / 6.0;
    return m;
}

struct PentagonMomentPartials {
    double area_q = 0.0, area_b = 0.0;
    double ixx_q = 0.0, ixx_b = 0.0;
    double iyy_q = 0.0, iyy_b = 0.0;
};

/// Analytic partial derivatives of the closed-form moments with respect to
/// q and b (product rule over the determinant factors above).
inline PentagonMomentPartials closed_form_moment_partials(const PentagonParams& p) {
    const double q = p.q, b = p.b, r = p.r(), c = p.c();
    const double rq = q / r;
    const double cq = (b - q) / (r * r * r);
    const double cb = q / r;

    const double d1 = r / b, d2 = b * r - q * c, d3 = b * c;
    const double d1q = q / (r * b), d1b = -r / (b * b);
    const double d2q = b * rq - c - q * cq, d2b = 1.0 / r;
    const double d3q = b * cq, d3b = c + b * cb;

    const double g1 = 1.0 / (b * b) - q / b + q * q;
    const double g2 = q * q + q * b + b * b;
    const double g3 = 3.0 * b * b;
    const double g1q = 2.0 * q - 1.0 / b, g1b = q / (b * b) - 2.0 / (b * b * b);
    const double g2q = 2.0 * q + b, g2b = q + 2.0 * b;
    const double g3q = 0.0, g3b = 6.0 * b;

    const double h1 = r * r;
    const double h2 = r * r + r * c + c * c;
    const double h3 = c * c;
    const double h1q = 2.0 * q, h1b = 0.0;
    const double h2q = 2.0 * q + rq * c + r * cq + 2.0 * c * cq;
    const double h2b = r * cb + 2.0 * c * cb;
    const double h3q = 2.0 * c * cq, h3b = 2.0 * c * cb;

    PentagonMomentPartials d;
    d.area_q = d1q + d2q + d3q;
    d.area_b = d1b + d2b + d3b;
    d.ixx_q = (d1q * g1 + d1 * g1q + d2q * g2 + d2 * g2q + d3q * g3 + d3 * g3q) / 6.0;
    d.ixx_b = (d1b * g1 + d1 * g1b + d2b * g2 + d2 * g2b + d3b * g3 + d3 * g3b) / 6.0;
    d.iyy_q = (d1q * h1 + d1 * h1q + d2q * h2 + d2 * h2q + d3q * h3 + d3 * h3q) / 6.0;
    d.iyy_b = (d1b * h1 + d1 * h1b + d2b * h2 + d2 * h2b + d3b * h3 + d3 * h3b) / 6.0;
    return d;
}

/// s(q, b) = det(|P|^2 I - 16 I(P)^2); its sign matches the sign of
/// det Hess F_P on the critical curve.
inline double s_func(const PentagonParams& p) {
    const PentagonMoments m = closed_form_moments(p);
    const double a2 = m.area * m.area;
    return (a2 - 16.0 * m.ixx * m.ixx) * (a2 - 16.0 * m.iyy * m.iyy);
}

/// t(q, b) = tr(|P|^2 I - 16 I(P)^2)/2; t < 0 is equivalent to
/// tr[cov(P) cov(P°)] > 1/8.
inline double t_func(const PentagonParams& p) {
    const PentagonMoments m = closed_form_moments(p);
    return m.area * m.area - 8.0 * (m.ixx * m.ixx + m.iyy * m.iyy);
}

struct TGradient {
    double t_q = 0.0;
    double t_b = 0.0;
};

inline TGradient t_gradient(const PentagonParams& p) {
    const PentagonMoments m = closed_form_moments(p);
    const PentagonMomentPartials d = closed_form_moment_partials(p);
    TGradient g;
    g.t_q = 2.0 * m.area * d.area_q - 16.0 * (m.ixx * d.ixx_q + m.iyy * d.iyy_q);
    g.t_b = 2.0 * m.area * d.area_b - 16.0 * (m.ixx * d.ixx_b + m.iyy * d.iyy_b);
    return g;
}

/// Total derivative of t(q, b(q)) along the critical curve.
inline double dt_dq_along_curve(double q) {
    const double b = solve_b(q);
    const TGradient g = t_gradient(PentagonParams(q, b));
    return g.t_q + curve_db_dq(q, b) * g.t_b;
}

struct SweepRow {
    double q = 0.0, b = 0.0;
    double area = 0.0, ixx = 0.0, iyy = 0.0;
    double s = 0.0, t = 0.0, vp = 0.0;
    double lambda_min = 0.0, lambda_max = 0.0;
};

inline SweepRow sweep_row(double q) {
    SweepRow row;
    row.q = q;
    row.b = solve_b(q);
    const PentagonParams params(q, row.b);
    const PentagonMoments m = closed_form_moments(params);
    row.area = m.area;
    row.ixx = m.ixx;
    row.iyy = m.iyy;
    row.s = s_func(params);
    row.t = t_func(params);
    row.vp = m.area * m.area; // |P°| = |-P| = |P|
    const HessianReport h = hessian_analytic(build(params));
    row.lambda_min = h.eigenvalues.front();
    row.lambda_max = h.eigenvalues.back();
    return row;
}

/// Equispaced sweep of the critical curve, ascending in q. Rows are
/// independent; `threads` > 1 fans them out with output order fixed by index.
inline std::vector<SweepRow> sweep(double q_from, double q_to, int steps, int threads = 1) {
    if (steps < 2) throw OutOfRange("sweep needs at least 2 steps");
    if (!(q_from < q_to)) throw OutOfRange("sweep requires q_from < q_to");
    if (q_from < kPentagonQMin - 1e-12 || q_to > kPentagonQMax + 1e-12)
        throw OutOfRange("sweep range outside [-1/sqrt2, 1/sqrt2]");

    std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
    const double dq = (q_to - q_from) / (steps - 1);
    auto q_at = [&](int i) { return i == steps - 1 ? q_to : q_from + i * dq; };

    const int workers = std::max(1, std::min(threads, steps));
    if (workers == 1) {
        for (int i = 0; i < steps; ++i) rows[static_cast<std::size_t>(i)] = sweep_row(q_at(i));
        return rows;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < steps; i = next.fetch_add(1))
                rows[static_cast<std::size_t>(i)] = sweep_row(q_at(i));
        });
    for (auto& th : pool) th.join();
    return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "q,b,area,Ixx,Iyy,s,t,vp,lambda_min,lambda_max\n";
    for (const SweepRow& r : rows)
        out << g17(r.q) << ',' << g17(r.b) << ',' << g17(r.area) << ',' << g17(r.ixx) << ','
            << g17(r.iyy) << ',' << g17(r.s) << ',' << g17(r.t) << ',' << g17(r.vp) << ','
            << g17(r.lambda_min) << ',' << g17(r.lambda_max) << '\n';
}

} // namespace mahlerlab
