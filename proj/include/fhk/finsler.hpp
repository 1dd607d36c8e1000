#pragma once

// Norms H on R^d (d = 2..4), their polars H0, and both gradients.
//
// H must be a symmetric norm: positively 1-homogeneous, convex, and with
// H(-xi) = H(xi). The polar is H0(x) = sup_{xi != 0} <xi,x> / H(xi). Built-in
// kinds have closed-form polars and gradients; arbitrary callback norms get a
// numeric gradient and a multi-start ascent for the polar.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fhk/error.hpp"
#include "fhk/linalg.hpp"

namespace fhk {

enum class NormKind { EUCLIDEAN, WEIGHTED_QUADRATIC, P_NORM, CUSTOM };

class FinslerNorm {
  public:
    static FinslerNorm euclidean(std::size_t dim) {
        FinslerNorm n(NormKind::EUCLIDEAN, dim);
        n.gamma1_ = n.gamma2_ = 1.0;
        return n;
    }

    // H(xi) = sqrt(xi^T M xi) with M symmetric positive definite.
    static FinslerNorm weighted_quadratic(const Mat& M) {
        FinslerNorm n(NormKind::WEIGHTED_QUADRATIC, M.n);
        n.M_ = M;
        n.Minv_ = inverse_spd(M);  // throws OUT_OF_DOMAIN unless SPD
        const Vec ev = symmetric_eigenvalues(M);
        n.gamma1_ = std::sqrt(ev.front());
        n.gamma2_ = std::sqrt(ev.back());
        return n;
    }

    // H(xi) = ||xi||_p, 1 < p < infinity; polar is the conjugate q-norm.
    static FinslerNorm p_norm(double p, std::size_t dim) {
        if (!(p > 1.0) || !std::isfinite(p))
            throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                        "p-norm requires 1 < p < inf, got p = " + std::to_string(p));
        FinslerNorm n(NormKind::P_NORM, dim);
        n.p_ = p;
        const double d = static_cast<double>(dim);
        if (p >= 2.0) {
            n.gamma1_ = std::pow(d, 1.0 / p - 0.5);
            n.gamma2_ = 1.0;
        } else {
            n.gamma1_ = 1.0;
            n.gamma2_ = std::pow(d, 1.0 / p - 0.5);
        }
        return n;
    }

    // Arbitrary symmetric norm given as a callback. The gradient is numeric,
    // the polar is computed by projected gradient ascent, and the comparison
    // constants are estimated from sampled directions (with a safety margin),
    // so they are bounds in practice rather than certified ones.
    static FinslerNorm custom(std::function<double(const Vec&)> h, std::size_t dim) {
        FinslerNorm n(NormKind::CUSTOM, dim);
        n.h_ = std::move(h);
        n.estimate_gamma_custom();
        return n;
    }

    NormKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    double gamma1() const { return gamma1_; }
    double gamma2() const { return gamma2_; }
    // family parameters; meaningful only for the matching kind
    double p_exponent() const { return p_; }
    const Mat& weight_matrix() const { return M_; }

    double value(const Vec& xi) const {
        switch (kind_) {
            case NormKind::EUCLIDEAN:
                return norm2(xi);
            case NormKind::WEIGHTED_QUADRATIC:
                return std::sqrt(dot(xi, M_.apply(xi)));
            case NormKind::P_NORM:
                return pnorm_value(xi, p_);
            case NormKind::CUSTOM:
                return h_(xi);
        }
        return 0.0;
    }

    // grad H, 0-homogeneous away from the origin.
    Vec gradient(const Vec& xi) const {
        const double scale = sup_abs(xi);
        if (!(scale > 1e-300))
            throw Error(ErrorCode::GRADIENT_TOO_SMALL,
                        "norm gradient requested at (numerically) zero vector");
        switch (kind_) {
            case NormKind::EUCLIDEAN: {
                const double h = norm2(xi);
                return (1.0 / h) * xi;
            }
            case NormKind::WEIGHTED_QUADRATIC: {
                const Vec mxi = M_.apply(xi);
                return (1.0 / std::sqrt(dot(xi, mxi))) * mxi;
            }
            case NormKind::P_NORM:
                return pnorm_gradient(xi, p_);
            case NormKind::CUSTOM:
                return numeric_gradient(xi);
        }
        return {};
    }

    // Polar norm H0(x) = sup <xi,x> / H(xi).
    double dual_value(const Vec& x) const {
        switch (kind_) {
            case NormKind::EUCLIDEAN:
                return norm2(x);
            case NormKind::WEIGHTED_QUADRATIC:
                return std::sqrt(dot(x, Minv_.apply(x)));
            case NormKind::P_NORM:
                return pnorm_value(x, p_ / (p_ - 1.0));
            case NormKind::CUSTOM:
                return ascend_dual(x).first;
        }
        return 0.0;
    }

    // grad H0. For CUSTOM this is the maximizing direction xi* with H(xi*)=1
    // (the support point), which equals the gradient wherever H0 is smooth.
    Vec dual_gradient(const Vec& x) const {
        const double scale = sup_abs(x);
        if (!(scale > 1e-300))
            throw Error(ErrorCode::GRADIENT_TOO_SMALL,
                        "polar gradient requested at (numerically) zero vector");
        switch (kind_) {
            case NormKind::EUCLIDEAN: {
                return (1.0 / norm2(x)) * x;
            }
            case NormKind::WEIGHTED_QUADRATIC: {
                const Vec mx = Minv_.apply(x);
                return (1.0 / std::sqrt(dot(x, mx))) * mx;
            }
            case NormKind::P_NORM:
                return pnorm_gradient(x, p_ / (p_ - 1.0));
            case NormKind::CUSTOM:
                return ascend_dual(x).second;
        }
        return {};
    }

  private:
    FinslerNorm(NormKind k, std::size_t dim) : kind_(k), dim_(dim) {
        if (dim < 2 || dim > 4)
            throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                        "norm dimension must be 2..4, got " + std::to_string(dim));
    }

    static double sup_abs(const Vec& v) {
        double m = 0.0;
        for (double c : v) m = std::max(m, std::abs(c));
        return m;
    }

    static double pnorm_value(const Vec& xi, double p) {
        const double s = sup_abs(xi);
        if (s == 0.0) return 0.0;
        double acc = 0.0;
        for (double c : xi) acc += std::pow(std::abs(c) / s, p);
        return s * std::pow(acc, 1.0 / p);
    }

    static Vec pnorm_gradient(const Vec& xi, double p) {
        const double s = sup_abs(xi);
        const double h = pnorm_value(xi, p) / s;  // value of rescaled vector
        Vec g(xi.size());
        for (std::size_t i = 0; i < xi.size(); ++i) {
            const double r = std::abs(xi[i]) / s;
            g[i] = (xi[i] >= 0 ? 1.0 : -1.0) * std::pow(r, p - 1.0) /
                   std::pow(h, p - 1.0);
        }
        return g;
    }

    Vec numeric_gradient(const Vec& xi) const {
        // 0-homogeneous, so rescale to O(1) first; central differences with
        // one Richardson step (h and h/2) for O(h^4) accuracy.
        const double s = sup_abs(xi);
        const Vec u = (1.0 / s) * xi;
        const double h = 1e-4;
        Vec g(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            auto diff = [&](double step) {
                Vec up = u, dn = u;
                up[i] += step;
                dn[i] -= step;
                return (h_(up) - h_(dn)) / (2.0 * step);
            };
            const double d1 = diff(h), d2 = diff(0.5 * h);
            g[i] = (4.0 * d2 - d1) / 3.0;
        }
        return g;
    }

    // Maximize <x,u>/H(u) over directions u. Superlevel sets of this ratio
    // are convex cones, so every strict local maximum is global; multi-start
    // guards against flat stretches and numerical stalls.
    std::pair<double, Vec> ascend_dual(const Vec& x) const {
        const double xs = sup_abs(x);
        if (!(xs > 1e-300))
            return {0.0, Vec(dim_, 0.0)};
        const Vec xn = (1.0 / xs) * x;
        auto objective = [&](const Vec& u) { return dot(xn, u) / h_(u); };

        std::vector<Vec> starts;
        for (std::size_t i = 0; i < dim_; ++i) {
            Vec e(dim_, 0.0);
            e[i] = 1.0;
            starts.push_back(e);
            e[i] = -1.0;
            starts.push_back(e);
        }
        starts.push_back((1.0 / norm2(xn)) * xn);
        SplitMix64 rng(0x5DEECE66DULL);
        for (int k = 0; k < 4; ++k) {
            Vec u(dim_);
            for (auto& c : u) c = rng.uniform(-1.0, 1.0);
            if (norm2(u) < 1e-3) u[0] = 1.0;
            starts.push_back((1.0 / norm2(u)) * u);
        }

        double best1 = -1.0, best2 = -1.0;
        Vec arg;
        for (const auto& s0 : starts) {
            Vec u = s0;
            double f = objective(u);
            for (int it = 0; it < 300; ++it) {
                // gradient of <xn,u>/H(u): xn/H - <xn,u> gradH / H^2
                const double H = h_(u);
                const Vec gH = numeric_gradient(u);
                Vec g(dim_);
                const double c = dot(xn, u);
                for (std::size_t i = 0; i < dim_; ++i)
                    g[i] = xn[i] / H - c * gH[i] / (H * H);
                double step = 1.0;
                bool moved = false;
                const double g2 = dot(g, g);
                if (g2 < 1e-28) break;
                while (step > 1e-12) {
                    Vec v = u + step * g;
                    const double nv = norm2(v);
                    v = (1.0 / nv) * v;
                    const double fv = objective(v);
                    if (fv > f + 1e-16) {
                        u = v;
                        f = fv;
                        moved = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!moved) break;
            }
            if (f > best1) {
                best2 = best1;
                best1 = f;
                arg = u;
            } else if (f > best2) {
                best2 = f;
            }
        }
        // The objective is linear over a strictly convex body, so every local
        // maximum is global; restarts landing meaningfully apart signal a
        // broken ascent (distinct faces differ at percent level). The margin
        // must absorb callback noise from nested numerical norms, which can
        // reach a few parts in 1e6.
        if (!(best2 > best1 * (1.0 - 1e-5)))
            throw Error(ErrorCode::OPTIMIZER_STALL,
                        "polar ascent restarts disagree: " + std::to_string(best1) +
                            " vs " + std::to_string(best2));
        // support point with H = 1; objective value already is H0 of xn
        const Vec xi_star = (1.0 / h_(arg)) * arg;
        return {best1 * xs, xi_star};
    }

    void estimate_gamma_custom() {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        auto consider = [&](const Vec& u) {
            const double n2 = norm2(u);
            if (n2 < 1e-12) return;
            const double r = h_((1.0 / n2) * u);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        };
        for (std::size_t i = 0; i < dim_; ++i) {
            Vec e(dim_, 0.0);
            e[i] = 1.0;
            consider(e);
        }
        SplitMix64 rng(0x9E3779B97F4A7C15ULL);
        for (int k = 0; k < 4096; ++k) {
            Vec u(dim_);
            for (auto& c : u) c = rng.uniform(-1.0, 1.0);
            consider(u);
        }
        gamma1_ = lo * 0.99;
        gamma2_ = hi * 1.01;
    }

    NormKind kind_;
    std::size_t dim_;
    double p_ = 2.0;
    Mat M_, Minv_;
    std::function<double(const Vec&)> h_;
    double gamma1_ = 1.0, gamma2_ = 1.0;
};

// The product norm Phi(xi, tau) = sqrt(H(xi)^2 + tau^2) on R^d x R and its
// polar Phi0(x, t) = sqrt(H0(x)^2 + t^2).
class ProductNorm {
  public:
    explicit ProductNorm(const FinslerNorm& h) : h_(&h) {}

    const FinslerNorm& base() const { return *h_; }

    double value(const Vec& xi, double tau) const {
        return std::hypot(h_->value(xi), tau);
    }

    double dual_value(const Vec& x, double t) const {
        return std::hypot(h_->dual_value(x), t);
    }

    // grad Phi = (H grad H / Phi, tau / Phi)
    std::pair<Vec, double> gradient(const Vec& xi, double tau) const {
        const double H = h_->value(xi);
        const double phi = std::hypot(H, tau);
        if (!(phi > 1e-300))
            throw Error(ErrorCode::GRADIENT_TOO_SMALL,
                        "product norm gradient at zero");
        double last = tau / phi;
        if (H == 0.0) return {Vec(h_->dim(), 0.0), last};
        Vec gx = h_->gradient(xi);
        for (auto& c : gx) c *= H / phi;
        return {gx, last};
    }

    std::pair<Vec, double> dual_gradient(const Vec& x, double t) const {
        const double H0 = h_->dual_value(x);
        const double rho = std::hypot(H0, t);
        if (!(rho > 1e-300))
            throw Error(ErrorCode::GRADIENT_TOO_SMALL,
                        "product polar gradient at zero");
        double last = t / rho;
        if (H0 == 0.0) return {Vec(h_->dim(), 0.0), last};
        Vec gx = h_->dual_gradient(x);
        for (auto& c : gx) c *= H0 / rho;
        return {gx, last};
    }

  private:
    const FinslerNorm* h_;
};

// Largest violation of the four structural identities linking H, H0 and their
// gradients, probed at one pair (xi, x):
//   <grad H(xi), xi> = H(xi)          (Euler)
//   grad H(2 xi) = grad H(xi) = -grad H(-xi)
//   H(grad H0(x)) = 1
//   H0(x) grad H(grad H0(x)) = x
inline double gradient_identity_residual(const FinslerNorm& H, const Vec& xi,
                                         const Vec& x) {
    double worst = 0.0;
    const Vec g = H.gradient(xi);
    worst = std::max(worst, std::abs(dot(g, xi) - H.value(xi)) / H.value(xi));

    const Vec g2 = H.gradient(2.0 * xi);
    const Vec gm = H.gradient(-1.0 * xi);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        worst = std::max(worst, std::abs(g2[i] - g[i]));
        worst = std::max(worst, std::abs(gm[i] + g[i]));
    }

    const Vec gd = H.dual_gradient(x);
    worst = std::max(worst, std::abs(H.value(gd) - 1.0));

    const double h0 = H.dual_value(x);
    const Vec back = H.gradient(gd);
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(h0 * back[i] - x[i]) / h0);
    return worst;
}

// Violation of |<xi,x>| <= H(xi) H0(x) (negative means satisfied slack-wise).
inline double cauchy_schwarz_excess(const FinslerNorm& H, const Vec& xi, const Vec& x) {
    return std::abs(dot(xi, x)) - H.value(xi) * H.dual_value(x);
}

// Finite-difference anisotropic Laplacian div(H(grad u) grad H(grad u)) of a
// scalar callback u at x. The gradient of u is itself formed by central
// differences, so u only needs point evaluations. Step h is absolute with a
// floor relative to |x|.
inline double finsler_laplacian_fd(const FinslerNorm& H,
                                   const std::function<double(const Vec&)>& u,
                                   const Vec& x, double h = 1e-5) {
    const std::size_t n = x.size();
    const double step = std::max(h, 1e-5 * norm2(x));
    auto grad_u = [&](const Vec& p) {
        Vec g(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            Vec pp = p, pm = p;
            pp[i] += step;
            pm[i] -= step;
            g[i] = (u(pp) - u(pm)) / (2.0 * step);
        }
        return g;
    };
    if (norm2(grad_u(x)) < 1e-8)
        throw Error(ErrorCode::GRADIENT_TOO_SMALL,
                    "finsler_laplacian_fd: |grad u| < 1e-8 at base point");
    auto field = [&](const Vec& p) {
        const Vec g = grad_u(p);
        if (norm2(g) < 1e-8)
            throw Error(ErrorCode::GRADIENT_TOO_SMALL,
                        "finsler_laplacian_fd: |grad u| < 1e-8 at sample point");
        return H.gradient(g) * H.value(g);
    };
    double div = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        div += (field(xp)[i] - field(xm)[i]) / (2.0 * step);
    }
    return div;
}

}  // namespace fhk
