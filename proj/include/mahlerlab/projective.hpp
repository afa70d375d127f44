#pragma once

#include <cmath>
#include <vector>

#include "mahlerlab/convex2d.hpp"
#include "mahlerlab/errors.hpp"
#include "mahlerlab/numkit.hpp"

// Homography algebra for RP^2 in the affine chart y -> [1, y]: the block
// parametrization phi, the twist alpha, their composite psi, and the action
// of a homography on a polygon within the chart.

namespace mahlerlab {

/// Projective transformation as a 3x3 matrix modulo scale. Stored normalized
/// so the top-left entry is 1 whenever it exceeds 1e-12 in magnitude.
class Homography {
public:
    explicit Homography(const Mat& m) : m_(m) {
        if (m.dim() != 3) throw BadDimension("homography matrix must be 3x3");
        if (std::abs(det(m)) <= 1e-12)
            throw SingularMatrix("homography matrix must be invertible");
        if (std::abs(m_.at(0, 0)) > 1e-12) {
            const double s = m_.at(0, 0); // x/x is exact, so the pivot lands on 1.0
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) m_.at(i, j) /= s;
        }
    }

    const Mat& matrix() const { return m_; }
    bool chart_normalized() const { return m_.at(0, 0) == 1.0; }

private:
    Mat m_;
};

inline Homography compose(const Homography& outer, const Homography& inner) {
    return Homography(outer.matrix() * inner.matrix());
}

/// Max-abs difference of the normalized representatives.
inline double homography_distance(const Homography& a, const Homography& b) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            d = std::max(d, std::abs(a.matrix().at(i, j) - b.matrix().at(i, j)));
    return d;
}

/// phi(M, x, xi) = P[[1, xi^t], [x, M]].
inline Homography phi(const Mat& m, Vec2 x, Vec2 xi) {
    if (m.dim() != 2) throw BadDimension("phi expects a 2x2 matrix");
    if (std::abs(det(m)) <= 1e-12) throw SingularMatrix("phi requires |det M| > 1e-12");
    Mat h(3);
    h.at(0, 0) = 1.0;
    h.at(0, 1) = xi.x;
    h.at(0, 2) = xi.y;
    h.at(1, 0) = x.x;
    h.at(2, 0) = x.y;
    h.at(1, 1) = m.at(0, 0);
    h.at(1, 2) = m.at(0, 1);
    h.at(2, 1) = m.at(1, 0);
    h.at(2, 2) = m.at(1, 1);
    return Homography(h);
}

struct AffineTriple {
    Mat m{2};
    Vec2 x;
    Vec2 xi;
};

/// alpha(N, y, eta) = (N (I + y eta^t), N y, eta).
inline AffineTriple alpha(const Mat& n, Vec2 y, Vec2 eta) {
    if (n.dim() != 2) throw BadDimension("alpha expects a 2x2 matrix");
    Mat twist = Mat::identity(2);
    twist.at(0, 0) += y.x * eta.x;
    twist.at(0, 1) += y.x * eta.y;
    twist.at(1, 0) += y.y * eta.x;
    twist.at(1, 1) += y.y * eta.y;
    AffineTriple out;
    out.m = n * twist;
    out.x = {n.at(0, 0) * y.x + n.at(0, 1) * y.y, n.at(1, 0) * y.x + n.at(1, 1) * y.y};
    out.xi = eta;
    return out;
}

/// alpha^{-1}(M, x, xi) = (M - x xi^t, (M - x xi^t)^{-1} x, xi).
inline AffineTriple alpha_inverse(const Mat& m, Vec2 x, Vec2 xi) {
    if (m.dim() != 2) throw BadDimension("alpha_inverse expects a 2x2 matrix");
    Mat k = m;
    k.at(0, 0) -= x.x * xi.x;
    k.at(0, 1) -= x.x * xi.y;
    k.at(1, 0) -= x.y * xi.x;
    k.at(1, 1) -= x.y * xi.y;
    const Mat kinv = inverse(k);
    AffineTriple out;
    out.m = k;
    out.x = {kinv.at(0, 0) * x.x + kinv.at(0, 1) * x.y,
             kinv.at(1, 0) * x.x + kinv.at(1, 1) * x.y};
    out.xi = xi;
    return out;
}

/// psi(N, y, eta): product of the dilation, translation and dual-translation
/// block factors; equals phi(alpha(N, y, eta)) as a projective class.
inline Homography psi(const Mat& n, Vec2 y, Vec2 eta) {
    if (n.dim() != 2) throw BadDimension("psi expects a 2x2 matrix");
    if (std::abs(det(n)) <= 1e-12) throw SingularMatrix("psi requires |det N| > 1e-12");
    Mat dil = Mat::identity(3);
    dil.at(1, 1) = n.at(0, 0);
    dil.at(1, 2) = n.at(0, 1);
    dil.at(2, 1) = n.at(1, 0);
    dil.at(2, 2) = n.at(1, 1);
    Mat tr = Mat::identity(3);
    tr.at(1, 0) = y.x;
    tr.at(2, 0) = y.y;
    Mat dual = Mat::identity(3);
    dual.at(0, 1) = eta.x;
    dual.at(0, 2) = eta.y;
    return Homography(dil * tr * dual);
}

/// Apply in the chart: v -> (x + M v) / (1 + xi^t v), with (M, x, xi) read
/// off the normalized matrix. Every vertex must stay strictly on the chart
/// side of the hyperplane at infinity; the image is re-hulled.
inline Polygon apply_to_polygon(const Homography& h, const Polygon& p) {
    if (!h.chart_normalized())
        throw ChartViolation("homography cannot be normalized in the affine chart");
    const Mat& m = h.matrix();
    const Vec2 xi{m.at(0, 1), m.at(0, 2)};
    const Vec2 x{m.at(1, 0), m.at(2, 0)};
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(p.size()));
    for (const Vec2& v : p.vertices()) {
        const double den = 1.0 + dot(xi, v);
        if (den <= 1e-12)
            throw ChartViolation("polygon vertex crosses the hyperplane at infinity");
        out.push_back((1.0 / den) * Vec2{x.x + m.at(1, 1) * v.x + m.at(1, 2) * v.y,
                                         x.y + m.at(2, 1) * v.x + m.at(2, 2) * v.y});
    }
    try {
        return make_polygon(std::move(out));
    } catch (const DegenerateInput&) {
        throw DegenerateImage("projective image of the polygon is degenerate");
    }
}

/// Pointwise admissibility of phi(M, x, xi) on the body: -xi strictly inside
/// p° and -x strictly inside M p.
inline bool validity_check(const Mat& m, Vec2 x, Vec2 xi, const Polygon& p) {
    try {
        if (!contains_point_interior(polar(p), -xi)) return false;
        if (m.dim() != 2 || std::abs(det(m)) <= 1e-12) return false;
        return contains_point_interior(linear_image(p, m), -x);
    } catch (const Error&) {
        return false;
    }
}

} // namespace mahlerlab
