#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mahlerlab/errors.hpp"
#include "mahlerlab/numkit.hpp"
#include "mahlerlab/random.hpp"

// Centered simplices in arbitrary (small) dimension: the Mahler equality
// case. Closed-form covariance and polar vertices, plus a Monte Carlo
// moment oracle that is independent of the closed forms.

namespace mahlerlab {

/// n+1 vertices spanning R^n and summing to zero.
class SimplexN {
public:
    SimplexN(int dim, std::vector<VecN> vertices) : d_(dim), v_(std::move(vertices)) {
        if (dim < 1) throw BadDimension("simplex dimension must be >= 1");
        if (static_cast<int>(v_.size()) != dim + 1)
            throw DegenerateInput("simplex needs exactly n+1 vertices");
        double scale = 0.0;
        VecN sum(dim);
        for (const VecN& v : v_) {
            if (v.dim() != dim) throw BadDimension("simplex vertex dimension mismatch");
            scale = std::max(scale, v.norm_inf());
            sum = sum + v;
        }
        if (scale <= 0.0) throw DegenerateInput("simplex has zero extent");
        if (sum.norm_inf() > 1e-12 * scale * (dim + 1))
            throw DegenerateInput("simplex vertices must sum to zero");
        const double vol = volume_of(*this);
        if (!(vol > 1e-14 * std::pow(scale, dim)))
            throw DegenerateInput("simplex vertices do not span");
    }

    int dim() const { return d_; }
    const std::vector<VecN>& vertices() const { return v_; }

    /// Edge matrix columns v_i - v_0, i = 1..n.
    Mat edge_matrix() const {
        Mat t(d_);
        for (int j = 0; j < d_; ++j)
            for (int i = 0; i < d_; ++i)
                t.at(i, j) = v_[static_cast<std::size_t>(j + 1)][i] - v_[0][i];
        return t;
    }

    static double volume_of(const SimplexN& s) {
        double f = 1.0;
        for (int k = 2; k <= s.d_; ++k) f *= k;
        return std::abs(det(s.edge_matrix())) / f;
    }

private:
    int d_ = 0;
    std::vector<VecN> v_;
};

inline double simplex_volume(const SimplexN& s) { return SimplexN::volume_of(s); }

/// Regular simplex with vertex sum zero and unit circumradius. The vertices
/// are the columns of the Helmert basis of the hyperplane orthogonal to
/// (1,...,1) in R^{n+1}, rescaled.
inline SimplexN regular_simplex(int n) {
    if (n < 1) throw BadDimension("regular_simplex requires n >= 1");
    std::vector<VecN> verts(static_cast<std::size_t>(n + 1), VecN(n));
    for (int k = 1; k <= n; ++k) {
        const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
        for (int i = 0; i <= n; ++i) {
            double h = 0.0;
            if (i < k)
                h = s;
            else if (i == k)
                h = -k * s;
            verts[static_cast<std::size_t>(i)][k - 1] = h;
        }
    }
    const double rescale = std::sqrt(static_cast<double>(n + 1) / n);
    for (VecN& v : verts) v = rescale * v;
    return SimplexN(n, std::move(verts));
}

/// Polar simplex: vertex w_j solves <v_i, w_j> = 1 for all i != j
/// (facet-vertex duality for a centered simplex).
inline SimplexN simplex_polar(const SimplexN& s) {
    const int n = s.dim();
    std::vector<VecN> polar_verts;
    polar_verts.reserve(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        Mat a(n);
        int row = 0;
        for (int i = 0; i <= n; ++i) {
            if (i == j) continue;
            for (int col = 0; col < n; ++col) a.at(row, col) = s.vertices()[static_cast<std::size_t>(i)][col];
            ++row;
        }
        VecN ones(n);
        for (int k = 0; k < n; ++k) ones[k] = 1.0;
        polar_verts.push_back(solve(a, ones));
    }
    return SimplexN(n, std::move(polar_verts));
}

/// cov(T) = (sum_i v_i v_i^t) / ((n+1)(n+2)) for a centered simplex. The
/// constant is cross-validated against the 2D engine, a hand integral in
/// n = 1 and the Monte Carlo oracle below.
inline SymMatrix simplex_covariance(const SimplexN& s) {
    const int n = s.dim();
    SymMatrix cov(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double acc = 0.0;
            for (const VecN& v : s.vertices()) acc += v[i] * v[j];
            cov.set(i, j, acc / ((n + 1.0) * (n + 2.0)));
        }
    return cov;
}

inline SimplexN linear_image(const SimplexN& s, const Mat& m) {
    if (m.dim() != s.dim()) throw BadDimension("linear_image dimension mismatch");
    if (std::abs(det(m)) <= 1e-12) throw SingularMatrix("linear_image requires |det| > 1e-12");
    std::vector<VecN> verts;
    verts.reserve(s.vertices().size());
    for (const VecN& v : s.vertices()) verts.push_back(m * v);
    return SimplexN(s.dim(), std::move(verts));
}

/// Max-abs residual of (n+2)^2 cov(T°) cov(T) - I at the regular simplex:
/// the matrix-inequality equality case.
inline double simplex_equality_residual(int n) {
    if (n < 1 || n > 6) throw BadDimension("simplex_equality_residual supports 1 <= n <= 6");
    const SimplexN t = regular_simplex(n);
    const SimplexN tp = simplex_polar(t);
    const double c = static_cast<double>((n + 2) * (n + 2));
    const Mat residual =
        c * (simplex_covariance(tp).to_mat() * simplex_covariance(t).to_mat()) - Mat::identity(n);
    return residual.max_abs();
}

struct MonteCarloMoments {
    /// Rejection-sampled volume over the closed-form volume (approaches 1).
    double volume_ratio = 0.0;
    SymMatrix cov_estimate{1};
    /// Largest per-entry standard error of cov_estimate.
    double stderr_max = 0.0;
};

/// Uniform samples inside the simplex by the exponential-spacings
/// barycentric method; deterministic for a fixed seed, and draw k is a pure
/// function of (seed, k) so chunked evaluation stays reproducible.
inline MonteCarloMoments monte_carlo_moments(const SimplexN& s, long samples,
                                             std::uint64_t seed) {
    const int n = s.dim();
    const auto& verts = s.vertices();

    std::vector<double> sum(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> lambda(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);

    for (long k = 0; k < samples; ++k) {
        double total = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double u = counter_uniform01(
                seed, static_cast<std::uint64_t>(k) * (n + 1) + static_cast<std::uint64_t>(j));
            lambda[static_cast<std::size_t>(j)] = -std::log(u);
            total += lambda[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < n; ++i) {
            double xi = 0.0;
            for (int j = 0; j <= n; ++j)
                xi += lambda[static_cast<std::size_t>(j)] * verts[static_cast<std::size_t>(j)][i];
            x[static_cast<std::size_t>(i)] = xi / total;
        }
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
                sum[static_cast<std::size_t>(i) * n + j] += v;
                sumsq[static_cast<std::size_t>(i) * n + j] += v * v;
            }
    }

    MonteCarloMoments out;
    out.cov_estimate = SymMatrix(n);
    const double inv = 1.0 / static_cast<double>(samples);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double mean = sum[static_cast<std::size_t>(i) * n + j] * inv;
            const double var =
                std::max(0.0, sumsq[static_cast<std::size_t>(i) * n + j] * inv - mean * mean);
            out.cov_estimate.set(i, j, mean);
            out.stderr_max = std::max(out.stderr_max, std::sqrt(var * inv));
        }

    // Independent volume estimate: rejection sampling in the bounding box,
    // on a separate substream of the same seed.
    std::vector<double> lo(static_cast<std::size_t>(n), 0.0), hi(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        lo[static_cast<std::size_t>(i)] = hi[static_cast<std::size_t>(i)] = verts[0][i];
        for (const VecN& v : verts) {
            lo[static_cast<std::size_t>(i)] = std::min(lo[static_cast<std::size_t>(i)], v[i]);
            hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], v[i]);
        }
    }
    double box_volume = 1.0;
    for (int i = 0; i < n; ++i)
        box_volume *= hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)];

    const Mat edge_inv = inverse(s.edge_matrix());
    const std::uint64_t seed2 = mix64(seed ^ 0xa3f6b7d1c95e204bULL);
    long hits = 0;
    VecN rel(n);
    for (long k = 0; k < samples; ++k) {
        for (int i = 0; i < n; ++i) {
            const double u = counter_uniform01(
                seed2, static_cast<std::uint64_t>(k) * n + static_cast<std::uint64_t>(i));
            rel[i] = lo[static_cast<std::size_t>(i)] +
                     u * (hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)]) -
                     verts[0][i];
        }
        const VecN bary = edge_inv * rel;
        double bsum = 0.0;
        bool inside = true;
        for (int i = 0; i < n; ++i) {
            if (bary[i] < 0.0) {
                inside = false;
                break;
            }
            bsum += bary[i];
        }
        if (inside && bsum <= 1.0) ++hits;
    }
    out.volume_ratio =
        (static_cast<double>(hits) * inv) * box_volume / simplex_volume(s);
    return out;
}

} // namespace mahlerlab
