#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "mahlerlab/errors.hpp"

// Small dense linear algebra for the low dimensions (n <= 8) used by the
// geometry modules. Everything is value-semantic and thread-safe.

namespace mahlerlab {

class VecN {
public:
    VecN() = default;
    explicit VecN(int dim) : c_(static_cast<std::size_t>(dim), 0.0) {
        if (dim < 1) throw BadDimension("VecN dimension must be >= 1");
    }
    VecN(std::initializer_list<double> vals) : c_(vals) {
        if (c_.empty()) throw BadDimension("VecN dimension must be >= 1");
    }
    explicit VecN(std::vector<double> vals) : c_(std::move(vals)) {
        if (c_.empty()) throw BadDimension("VecN dimension must be >= 1");
    }

    int dim() const { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& coords() const { return c_; }

    double norm() const {
        double s = 0.0;
        for (double v : c_) s += v * v;
        return std::sqrt(s);
    }
    double norm_inf() const {
        double s = 0.0;
        for (double v : c_) s = std::max(s, std::abs(v));
        return s;
    }

private:
    std::vector<double> c_;
};

inline VecN operator+(const VecN& a, const VecN& b) {
    VecN r = a;
    for (int i = 0; i < a.dim(); ++i) r[i] += b[i];
    return r;
}
inline VecN operator-(const VecN& a, const VecN& b) {
    VecN r = a;
    for (int i = 0; i < a.dim(); ++i) r[i] -= b[i];
    return r;
}
inline VecN operator*(double s, const VecN& a) {
    VecN r = a;
    for (int i = 0; i < a.dim(); ++i) r[i] *= s;
    return r;
}
inline double dot(const VecN& a, const VecN& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

class SymMatrix;

/// General dense square matrix (row-major). Used for homographies, products
/// of covariance matrices and small linear solves.
class Mat {
public:
    Mat() = default;
    explicit Mat(int dim) : d_(dim), a_(static_cast<std::size_t>(dim) * dim, 0.0) {
        if (dim < 1) throw BadDimension("Mat dimension must be >= 1");
    }
    Mat(int dim, std::initializer_list<double> vals) : Mat(dim) {
        if (static_cast<int>(vals.size()) != dim * dim)
            throw BadDimension("Mat initializer size mismatch");
        std::copy(vals.begin(), vals.end(), a_.begin());
    }

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int dim() const { return d_; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * d_ + j]; }
    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * d_ + j]; }

    double max_abs() const {
        double s = 0.0;
        for (double v : a_) s = std::max(s, std::abs(v));
        return s;
    }

    Mat transpose() const {
        Mat r(d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

private:
    int d_ = 0;
    std::vector<double> a_;
};

inline Mat operator*(const Mat& a, const Mat& b) {
    const int n = a.dim();
    Mat r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}
inline Mat operator*(double s, const Mat& a) {
    Mat r = a;
    for (int i = 0; i < r.dim(); ++i)
        for (int j = 0; j < r.dim(); ++j) r.at(i, j) *= s;
    return r;
}
inline Mat operator-(const Mat& a, const Mat& b) {
    Mat r = a;
    for (int i = 0; i < r.dim(); ++i)
        for (int j = 0; j < r.dim(); ++j) r.at(i, j) -= b.at(i, j);
    return r;
}
inline VecN operator*(const Mat& a, const VecN& v) {
    VecN r(a.dim());
    for (int i = 0; i < a.dim(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.dim(); ++j) s += a.at(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

/// Determinant by LU with partial pivoting (closed form for dim <= 3).
inline double det(const Mat& m) {
    const int n = m.dim();
    if (n <= 3) {
        // buffered closed forms: no index ever exceeds what was copied
        double e[9] = {0};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) e[i * n + j] = m.at(i, j);
        if (n == 1) return e[0];
        if (n == 2) return e[0] * e[3] - e[1] * e[2];
        return e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6]) +
               e[2] * (e[3] * e[7] - e[4] * e[6]);
    }
    Mat a = m;
    double sign = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a.at(r, col)) > std::abs(a.at(piv, col))) piv = r;
        if (a.at(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
            sign = -sign;
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a.at(r, col) / a.at(col, col);
            for (int j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
        }
    }
    double d = sign;
    for (int i = 0; i < n; ++i) d *= a.at(i, i);
    return d;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Mat inverse(const Mat& m) {
    const int n = m.dim();
    Mat a = m;
    Mat inv = Mat::identity(n);
    const double floor = 1e-14 * std::max(1e-300, m.max_abs());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a.at(r, col)) > std::abs(a.at(piv, col))) piv = r;
        if (std::abs(a.at(piv, col)) <= floor)
            throw SingularMatrix("matrix is numerically singular");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        const double p = a.at(col, col);
        for (int j = 0; j < n; ++j) {
            a.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a.at(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a.at(r, j) -= f * a.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

/// Solve m x = rhs (partial-pivoting LU, small dimensions).
inline VecN solve(const Mat& m, const VecN& rhs) {
    const int n = m.dim();
    Mat a = m;
    VecN b = rhs;
    const double floor = 1e-14 * std::max(1e-300, m.max_abs());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a.at(r, col)) > std::abs(a.at(piv, col))) piv = r;
        if (std::abs(a.at(piv, col)) <= floor)
            throw SingularSystem("linear system is numerically singular");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a.at(r, col) / a.at(col, col);
            b[r] -= f * b[col];
            for (int j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
        }
    }
    VecN x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a.at(i, j) * x[j];
        x[i] = s / a.at(i, i);
    }
    return x;
}

/// Symmetric matrix; both triangles are kept in sync by construction.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int dim) : d_(dim), a_(static_cast<std::size_t>(dim) * dim, 0.0) {
        if (dim < 1) throw BadDimension("SymMatrix dimension must be >= 1");
    }
    /// Row-major initializer; the strict lower triangle must mirror the upper.
    SymMatrix(int dim, std::initializer_list<double> vals) : SymMatrix(dim) {
        if (static_cast<int>(vals.size()) != dim * dim)
            throw BadDimension("SymMatrix initializer size mismatch");
        std::copy(vals.begin(), vals.end(), a_.begin());
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
                const double u = ref(i, j), l = ref(j, i);
                if (u != l) {
                    // mirror the average so the invariant holds exactly
                    const double m = 0.5 * (u + l);
                    ref(i, j) = m;
                    ref(j, i) = m;
                }
            }
    }

    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.ref(i, i) = 1.0;
        return m;
    }
    static SymMatrix diagonal(std::span<const double> d) {
        SymMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.dim(); ++i) m.ref(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }
    static SymMatrix diagonal(std::initializer_list<double> d) {
        return diagonal(std::span<const double>(d.begin(), d.size()));
    }
    static SymMatrix from_mat_symmetrized(const Mat& m) {
        SymMatrix r(m.dim());
        for (int i = 0; i < m.dim(); ++i)
            for (int j = 0; j < m.dim(); ++j) r.ref(i, j) = 0.5 * (m.at(i, j) + m.at(j, i));
        return r;
    }

    int dim() const { return d_; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * d_ + j]; }
    void set(int i, int j, double v) {
        a_[static_cast<std::size_t>(i) * d_ + j] = v;
        a_[static_cast<std::size_t>(j) * d_ + i] = v;
    }

    double max_abs() const {
        double s = 0.0;
        for (double v : a_) s = std::max(s, std::abs(v));
        return s;
    }

    Mat to_mat() const {
        Mat m(d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) m.at(i, j) = at(i, j);
        return m;
    }

private:
    int d_ = 0;
    std::vector<double> a_;

    double& ref(int i, int j) { return a_[static_cast<std::size_t>(i) * d_ + j]; }
};

inline SymMatrix operator*(double s, const SymMatrix& m) {
    SymMatrix r = m;
    for (int i = 0; i < r.dim(); ++i)
        for (int j = i; j < r.dim(); ++j) r.set(i, j, s * m.at(i, j));
    return r;
}
inline SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    SymMatrix r = a;
    for (int i = 0; i < r.dim(); ++i)
        for (int j = i; j < r.dim(); ++j) r.set(i, j, a.at(i, j) - b.at(i, j));
    return r;
}

struct EigenPair {
    double value = 0.0;
    VecN vector;
};

/// Eigen decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Pairs come back sorted by ascending eigenvalue with orthonormal vectors.
inline std::vector<EigenPair> sym_eigen(const SymMatrix& m) {
    const int n = m.dim();
    Mat a = m.to_mat();
    Mat v = Mat::identity(n);
    const double scale = 1.0 + m.max_abs();

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(a.at(i, j)));
        if (off <= 1e-15 * scale) break;

        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = a.at(p, p), aqq = a.at(q, q);
                a.at(p, p) = app - t * apq;
                a.at(q, q) = aqq + t * apq;
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(p, k) = a.at(k, p);
                    a.at(k, q) = s * akp + c * akq;
                    a.at(q, k) = a.at(k, q);
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a.at(i, i) < a.at(j, j); });

    std::vector<EigenPair> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int idx : order) {
        EigenPair p;
        p.value = a.at(idx, idx);
        p.vector = VecN(n);
        for (int k = 0; k < n; ++k) p.vector[k] = v.at(k, idx);
        out.push_back(std::move(p));
    }
    return out;
}

inline double det(const SymMatrix& m) {
    if (m.dim() == 1) return m.at(0, 0);
    if (m.dim() == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(0, 1);
    return det(m.to_mat());
}

/// Inverse of a well-conditioned symmetric matrix. Requires
/// |det| > 1e-14 * max_abs^dim (throws SingularMatrix otherwise).
inline SymMatrix inverse(const SymMatrix& m) {
    const double norm = m.max_abs();
    const double d = det(m);
    if (std::abs(d) <= 1e-14 * std::pow(std::max(norm, 1e-300), m.dim()))
        throw SingularMatrix("symmetric matrix is numerically singular");
    return SymMatrix::from_mat_symmetrized(inverse(m.to_mat()));
}

enum class Definiteness {
    PositiveDefinite,
    PositiveSemiDefinite,
    Indefinite,
    NegativeSemiDefinite,
    NegativeDefinite,
};

/// Classify by eigenvalue signs; |lambda| <= tol*(1 + max|lambda|) counts as
/// zero. The zero matrix classifies as positive semi-definite.
inline Definiteness psd_check(const SymMatrix& m, double tol) {
    const auto eig = sym_eigen(m);
    double lmax = 0.0;
    for (const auto& e : eig) lmax = std::max(lmax, std::abs(e.value));
    const double thr = tol * (1.0 + lmax);

    int pos = 0, neg = 0, zero = 0;
    for (const auto& e : eig) {
        if (e.value > thr)
            ++pos;
        else if (e.value < -thr)
            ++neg;
        else
            ++zero;
    }
    if (pos > 0 && neg > 0) return Definiteness::Indefinite;
    if (pos > 0) return zero > 0 ? Definiteness::PositiveSemiDefinite : Definiteness::PositiveDefinite;
    if (neg > 0) return zero > 0 ? Definiteness::NegativeSemiDefinite : Definiteness::NegativeDefinite;
    return Definiteness::PositiveSemiDefinite;
}

inline const char* to_string(Definiteness d) {
    switch (d) {
        case Definiteness::PositiveDefinite: return "positive_definite";
        case Definiteness::PositiveSemiDefinite: return "positive_semi_definite";
        case Definiteness::Indefinite: return "indefinite";
        case Definiteness::NegativeSemiDefinite: return "negative_semi_definite";
        case Definiteness::NegativeDefinite: return "negative_definite";
    }
    return "unknown";
}

} // namespace mahlerlab
