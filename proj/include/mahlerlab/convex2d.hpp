#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mahlerlab/errors.hpp"
#include "mahlerlab/numkit.hpp"

// Exact-formula engine for 2D convex polygons: polarity, moments and the
// volume product. Polygons are strictly convex, counter-clockwise and
// deduplicated; all tolerances are relative to the max-abs coordinate.

namespace mahlerlab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 rot90(Vec2 a) { return {a.y, -a.x}; }

namespace detail {
inline double coord_scale(const std::vector<Vec2>& pts) {
    double s = 0.0;
    for (const Vec2& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return s;
}
} // namespace detail

/// Strictly convex CCW polygon. The constructor validates but does not
/// reorder; use make_polygon() for arbitrary point clouds.
class Polygon {
public:
    explicit Polygon(std::vector<Vec2> vertices) : v_(std::move(vertices)) {
        const int n = static_cast<int>(v_.size());
        if (n < 3) throw DegenerateInput("polygon needs at least 3 vertices");
        scale_ = detail::coord_scale(v_);
        if (scale_ <= 0.0) throw DegenerateInput("polygon has zero extent");
        for (int i = 0; i < n; ++i) {
            const Vec2 a = v_[static_cast<std::size_t>(i)];
            const Vec2 b = v_[static_cast<std::size_t>((i + 1) % n)];
            const Vec2 c = v_[static_cast<std::size_t>((i + 2) % n)];
            if (norm(b - a) <= 1e-12 * scale_)
                throw DegenerateInput("polygon has coincident consecutive vertices");
            if (cross(b - a, c - b) <= 1e-12 * scale_ * scale_)
                throw DegenerateInput("polygon is not strictly convex CCW");
        }
    }

    const std::vector<Vec2>& vertices() const { return v_; }
    int size() const { return static_cast<int>(v_.size()); }
    Vec2 vertex(int i) const { return v_[static_cast<std::size_t>(i)]; }
    /// Max-abs vertex coordinate; reference length for tolerances.
    double scale() const { return scale_; }

private:
    std::vector<Vec2> v_;
    double scale_ = 0.0;
};

/// Convex hull (monotone chain) of the input points, deduplicated and CCW.
/// The chain itself uses exact-sign turn predicates; tolerance-based cleanup
/// (dropping near-duplicate vertices and near-collinear middles) runs
/// afterwards, where removing a vertex is always safe.
inline Polygon make_polygon(std::vector<Vec2> pts) {
    if (pts.size() < 3) throw DegenerateInput("need at least 3 points");
    const double scale = detail::coord_scale(pts);
    if (scale <= 0.0) throw DegenerateInput("points have zero extent");
    const double tol = 1e-12 * scale;
    const double tol2 = 1e-12 * scale * scale;

    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) throw DegenerateInput("fewer than 3 distinct points");

    auto build_chain = [](auto begin, auto end) {
        std::vector<Vec2> chain;
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= 2 &&
                   cross(chain.back() - chain[chain.size() - 2], *it - chain.back()) <= 0.0)
                chain.pop_back();
            chain.push_back(*it);
        }
        return chain;
    };
    std::vector<Vec2> hull = build_chain(pts.begin(), pts.end());
    const std::vector<Vec2> upper = build_chain(pts.rbegin(), pts.rend());
    hull.pop_back();
    hull.insert(hull.end(), upper.begin(), upper.end() - 1);

    // cyclic cleanup to the strict-convexity tolerance
    bool changed = true;
    while (changed && hull.size() > 2) {
        changed = false;
        const std::size_t n = hull.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 prev = hull[(i + n - 1) % n];
            const Vec2 cur = hull[i];
            const Vec2 next = hull[(i + 1) % n];
            if (norm(cur - prev) <= tol || cross(cur - prev, next - cur) <= tol2) {
                hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    if (hull.size() < 3) throw DegenerateInput("hull is degenerate");
    return Polygon(std::move(hull));
}

inline double area(const Polygon& p) {
    double s = 0.0;
    const int n = p.size();
    for (int i = 0; i < n; ++i) s += cross(p.vertex(i), p.vertex((i + 1) % n));
    return 0.5 * s;
}

/// Strict interiority of an arbitrary point: signed distance to every edge
/// line exceeds 1e-12 * scale.
inline bool contains_point_interior(const Polygon& p, Vec2 z) {
    const double margin = 1e-12 * std::max(p.scale(), std::max(std::abs(z.x), std::abs(z.y)));
    const int n = p.size();
    for (int i = 0; i < n; ++i) {
        const Vec2 a = p.vertex(i);
        const Vec2 e = p.vertex((i + 1) % n) - a;
        if (cross(e, z - a) <= margin * norm(e)) return false;
    }
    return true;
}

inline bool contains_origin_interior(const Polygon& p) {
    return contains_point_interior(p, Vec2{0.0, 0.0});
}

/// Polar body. Edge (v_i, v_{i+1}) dualizes to the vertex a_i solving
/// <a_i, v_i> = <a_i, v_{i+1}> = 1; with a CCW source and interior origin the
/// duals come out CCW in edge order (validated, never re-sorted).
inline Polygon polar(const Polygon& p) {
    if (!contains_origin_interior(p))
        throw OriginNotInterior("polar body requires the origin strictly inside");
    const int n = p.size();
    std::vector<Vec2> duals;
    duals.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Vec2 a = p.vertex(i);
        const Vec2 b = p.vertex((i + 1) % n);
        duals.push_back((1.0 / cross(a, b)) * rot90(b - a));
    }
    return Polygon(std::move(duals));
}

inline Polygon translate(const Polygon& p, Vec2 t) {
    std::vector<Vec2> v = p.vertices();
    for (Vec2& w : v) w = w + t;
    return Polygon(std::move(v));
}

/// Image under an invertible 2x2 matrix; orientation re-fixed if det < 0.
inline Polygon linear_image(const Polygon& p, const Mat& m) {
    if (m.dim() != 2) throw BadDimension("linear_image expects a 2x2 matrix");
    const double d = det(m);
    if (std::abs(d) <= 1e-12) throw SingularMatrix("linear_image requires |det| > 1e-12");
    std::vector<Vec2> v = p.vertices();
    for (Vec2& w : v)
        w = {m.at(0, 0) * w.x + m.at(0, 1) * w.y, m.at(1, 0) * w.x + m.at(1, 1) * w.y};
    if (d < 0.0) std::reverse(v.begin(), v.end());
    return Polygon(std::move(v));
}

/// Signed integrals of 1, x_i and x_i x_j over a triangle (p0, p1, p2), all
/// about the origin; additive under signed decompositions.
struct MomentSums {
    double area = 0.0;
    double sx = 0.0, sy = 0.0;
    double ixx = 0.0, ixy = 0.0, iyy = 0.0;

    MomentSums& operator+=(const MomentSums& o) {
        area += o.area;
        sx += o.sx;
        sy += o.sy;
        ixx += o.ixx;
        ixy += o.ixy;
        iyy += o.iyy;
        return *this;
    }
};

inline MomentSums triangle_moment_sums(Vec2 p0, Vec2 p1, Vec2 p2) {
    const double d = cross(p1 - p0, p2 - p0);
    MomentSums m;
    m.area = 0.5 * d;
    m.sx = d * (p0.x + p1.x + p2.x) / 6.0;
    m.sy = d * (p0.y + p1.y + p2.y) / 6.0;
    m.ixx = d *
            (p0.x * p0.x + p1.x * p1.x + p2.x * p2.x + p0.x * p1.x + p0.x * p2.x + p1.x * p2.x) /
            12.0;
    m.iyy = d *
            (p0.y * p0.y + p1.y * p1.y + p2.y * p2.y + p0.y * p1.y + p0.y * p2.y + p1.y * p2.y) /
            12.0;
    m.ixy = d *
            (p0.x * (2.0 * p0.y + p1.y + p2.y) + p1.x * (p0.y + 2.0 * p1.y + p2.y) +
             p2.x * (p0.y + p1.y + 2.0 * p2.y)) /
            24.0;
    return m;
}

/// Area |P|, barycenter G_P and the absolute (origin-based) second moment
/// I(P) = integral of x_i x_j over P. Not the centered covariance.
struct Moments {
    double area = 0.0;
    Vec2 barycenter;
    SymMatrix inertia{2};
};

/// Signed fan from an arbitrary apex; the result does not depend on it.
inline Moments moments(const Polygon& p, Vec2 fan_apex) {
    MomentSums s;
    const int n = p.size();
    for (int i = 0; i < n; ++i)
        s += triangle_moment_sums(fan_apex, p.vertex(i), p.vertex((i + 1) % n));
    Moments m;
    m.area = s.area;
    m.barycenter = {s.sx / s.area, s.sy / s.area};
    m.inertia.set(0, 0, s.ixx);
    m.inertia.set(0, 1, s.ixy);
    m.inertia.set(1, 1, s.iyy);
    return m;
}

inline Moments moments(const Polygon& p) { return moments(p, Vec2{0.0, 0.0}); }

/// cov(K) = I(K)/|K| for a barycenter-centered body. A body whose barycenter
/// is farther than 1e-9 * scale from the origin is rejected: re-centering
/// silently would hide criticality bugs.
inline SymMatrix covariance(const Polygon& p) {
    const Moments m = moments(p);
    if (norm(m.barycenter) > 1e-9 * p.scale())
        throw NotCentered("covariance requires the barycenter at the origin");
    return (1.0 / m.area) * m.inertia;
}

inline double volume_product(const Polygon& p) { return area(p) * area(polar(p)); }

} // namespace mahlerlab
