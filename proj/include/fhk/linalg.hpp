#pragma once

// Small dense vector/matrix helpers for dimensions 2..4. Everything here is
// deliberately tiny and allocation-light; the library never needs more than
// 4x4 symmetric matrices, so no external linear-algebra dependency is pulled in.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fhk/error.hpp"

namespace fhk {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator*(double c, const Vec& a) {
    Vec r(a);
    for (auto& v : r) v *= c;
    return r;
}

inline Vec operator*(const Vec& a, double c) { return c * a; }

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

// Row-major square matrix.
struct Mat {
    std::size_t n = 0;
    std::vector<double> a;  // n*n, row-major

    Mat() = default;
    explicit Mat(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    static Mat identity(std::size_t dim) {
        Mat m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat diag(const Vec& d) {
        Mat m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    Vec apply(const Vec& x) const {
        Vec y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }
};

// Cholesky factorization of a symmetric positive definite matrix: A = L L^T.
// Throws OUT_OF_DOMAIN when a pivot is not strictly positive.
inline Mat cholesky(const Mat& A) {
    const std::size_t n = A.n;
    Mat L(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (s <= 0.0)
                    throw Error(ErrorCode::OUT_OF_DOMAIN,
                                "matrix is not positive definite (pivot " + std::to_string(s) + ")");
                L(i, i) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return L;
}

// Solves A x = b for SPD A via its Cholesky factor.
inline Vec solve_spd(const Mat& A, const Vec& b) {
    const Mat L = cholesky(A);
    const std::size_t n = A.n;
    Vec y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * y[k];
        y[i] = s / L(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= L(k, ii) * x[k];
        x[ii] = s / L(ii, ii);
    }
    return x;
}

inline Mat inverse_spd(const Mat& A) {
    const std::size_t n = A.n;
    Mat inv(n);
    for (std::size_t j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        Vec col = solve_spd(A, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

// Eigenvalues of a small symmetric matrix by the cyclic Jacobi method.
// Returns them in ascending order. Good to near machine precision for n <= 4.
inline Vec symmetric_eigenvalues(Mat A) {
    const std::size_t n = A.n;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(A(p, q)) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Vec ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = A(i, i);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = i; j > 0 && ev[j - 1] > ev[j]; --j) std::swap(ev[j - 1], ev[j]);
    return ev;
}

// Principal square root of an SPD matrix via Denman-Beavers iteration.
inline Mat sqrt_spd(const Mat& A) {
    const std::size_t n = A.n;
    Mat Y = A, Z = Mat::identity(n);
    for (int it = 0; it < 64; ++it) {
        const Mat Yinv = inverse_spd(Y), Zinv = inverse_spd(Z);
        Mat Yn(n), Zn(n);
        double delta = 0.0;
        for (std::size_t i = 0; i < n * n; ++i) {
            Yn.a[i] = 0.5 * (Y.a[i] + Zinv.a[i]);
            Zn.a[i] = 0.5 * (Z.a[i] + Yinv.a[i]);
            delta += std::abs(Yn.a[i] - Y.a[i]);
        }
        Y = Yn;
        Z = Zn;
        if (delta < 1e-15) break;
    }
    return Y;
}

// Deterministic xorshift-based generator (splitmix64). Used everywhere a test
// or the CLI needs reproducible pseudo-random numbers; never std::rand.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

  private:
    std::uint64_t state_;
};

}  // namespace fhk
