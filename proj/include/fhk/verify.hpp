#pragma once

// Quadrature verification of the trace-Hardy inequality
//
//   K(N,beta) \int_{t=0} u^2 / H0(x) dx
//     <= \int Phi(grad u)^2 dz - (beta-2)^2/4 \int u^2 / Phi0(z)^2 dz
//
// on truncated half-spaces and cones, plus the Rayleigh-quotient sharpness
// experiments with cutoff extremal sequences.
//
// Test functions carry closed-form gradients.  The built-in families are
// axially symmetric — functions of (rho, theta) only — which collapses the
// spherical factor of every integral into one cached scalar and makes full
// parameter sweeps cheap.  For such u = U(rho, theta),
//
//   grad_x u = [U_rho cos(theta) - U_theta sin(theta)/rho] grad H0(x),
//   u_t      =  U_rho sin(theta) + U_theta cos(theta)/rho,
//
// and H(grad H0) = 1 turns the energy density Phi(grad u)^2 into
// c^2 + u_t^2 with no norm evaluations at all.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "fhk/constants.hpp"
#include "fhk/error.hpp"
#include "fhk/extremal.hpp"
#include "fhk/finsler.hpp"
#include "fhk/quadrature.hpp"

namespace fhk {

enum class TestFamily { BUMP, CUTOFF_EXTREMAL, GAUSSIAN_PRODUCT, CUSTOM };

inline const char* to_string(TestFamily f) {
  switch (f) {
    case TestFamily::BUMP: return "BUMP";
    case TestFamily::CUTOFF_EXTREMAL: return "CUTOFF_EXTREMAL";
    case TestFamily::GAUSSIAN_PRODUCT: return "GAUSSIAN_PRODUCT";
    case TestFamily::CUSTOM: return "CUSTOM";
  }
  return "?";
}

// Value and polar partial derivatives of an axially symmetric test function.
struct ProfileEval {
  double value;
  double d_rho;
  double d_theta;
};

class TestFunction {
 public:
  // Smooth mollifier bump in s = log(rho), supported on rho in (r0, r1),
  // modulated by the angular polynomial 1 + a sin(theta) + b sin^2(theta).
  static TestFunction bump(double r0, double r1, double a = 0.0,
                           double b = 0.0) {
    if (!(r0 > 0.0) || !(r1 > r0))
      throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                  "bump support needs 0 < r0 < r1");
    TestFunction u;
    u.family_ = TestFamily::BUMP;
    u.lo_ = r0;
    u.hi_ = r1;
    const double s0 = std::log(r0), s1 = std::log(r1);
    u.breaks_ = {s0, s1};
    u.profile_ = [s0, s1, a, b](double rho, double theta) -> ProfileEval {
      const double s = std::log(rho);
      const double xi = 2.0 * (s - s0) / (s1 - s0) - 1.0;
      if (std::abs(xi) >= 1.0) return {0.0, 0.0, 0.0};
      const double q = 1.0 - xi * xi;
      const double m = std::exp(1.0 - 1.0 / q);
      const double dm_dxi = m * (-2.0 * xi / (q * q));
      const double dB_ds = dm_dxi * 2.0 / (s1 - s0);
      const double tau = std::sin(theta);
      const double ang = 1.0 + a * tau + b * tau * tau;
      const double dang = (a + 2.0 * b * tau) * std::cos(theta);
      return {m * ang, dB_ds / rho * ang, m * dang};
    };
    return u;
  }

  // Extremal solution (half-space or cone normalized) times the radial
  // cutoff eta(s) = sin(pi (s - log r) / log(R/r)), supported on r < rho < R.
  // The sine profile is the minimizer of the radial Rayleigh excess
  // (integral of eta'^2 over integral of eta^2 with Dirichlet ends equals
  // pi^2/log^2(R/r)), so the quotient approaches the sharp constant as fast
  // as any radial cutoff allows.
  static TestFunction cutoff_extremal(const ExtremalSolution& sol, double r,
                                      double R) {
    if (!(r > 0.0) || !(R > r))
      throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                  "cutoff window needs 0 < r < R");
    TestFunction u;
    u.family_ = TestFamily::CUTOFF_EXTREMAL;
    u.lo_ = r;
    u.hi_ = R;
    const double s0 = std::log(r);
    const double L = std::log(R / r);
    u.breaks_ = {s0, s0 + L};
    auto sol_copy = std::make_shared<ExtremalSolution>(sol);
    u.profile_ = [sol_copy, s0, L](double rho, double theta) -> ProfileEval {
      const double s = std::log(rho);
      const double arg = M_PI * (s - s0) / L;
      if (arg <= 0.0 || arg >= M_PI) return {0.0, 0.0, 0.0};
      const double eta = std::sin(arg);
      const double deta_ds = (M_PI / L) * std::cos(arg);
      const auto p = sol_copy->profile_partials(rho, theta);
      return {p.value * eta, p.d_rho * eta + p.value * deta_ds / rho,
              p.d_theta * eta};
    };
    return u;
  }

  // exp(-rho^2): globally supported, anisotropically radial.
  static TestFunction gaussian() {
    TestFunction u;
    u.family_ = TestFamily::GAUSSIAN_PRODUCT;
    u.lo_ = 0.0;
    u.hi_ = std::numeric_limits<double>::infinity();
    u.profile_ = [](double rho, double theta) -> ProfileEval {
      (void)theta;
      const double v = std::exp(-rho * rho);
      return {v, -2.0 * rho * v, 0.0};
    };
    return u;
  }

  // Custom axially symmetric profile with closed-form partials.
  static TestFunction custom_axisym(
      std::function<ProfileEval(double, double)> profile, double lo,
      double hi, std::vector<double> s_breaks = {}) {
    TestFunction u;
    u.family_ = TestFamily::CUSTOM;
    u.profile_ = std::move(profile);
    u.lo_ = lo;
    u.hi_ = hi;
    u.breaks_ = std::move(s_breaks);
    return u;
  }

  // Fully general pointwise callback; gradients fall back to central
  // differences, which costs accuracy (documented tolerance factor 10) and
  // forces the full tensor quadrature path.
  static TestFunction custom_general(
      std::function<double(const Vec&, double)> value, double lo, double hi,
      std::vector<double> s_breaks = {}) {
    TestFunction u;
    u.family_ = TestFamily::CUSTOM;
    u.general_ = std::move(value);
    u.lo_ = lo;
    u.hi_ = hi;
    u.breaks_ = std::move(s_breaks);
    return u;
  }

  TestFamily family() const { return family_; }
  bool axisymmetric() const { return static_cast<bool>(profile_); }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  const std::vector<double>& radial_breaks() const { return breaks_; }

  ProfileEval profile(double rho, double theta) const {
    return profile_(rho, theta);
  }
  double value_general(const Vec& x, double t) const { return general_(x, t); }

 private:
  TestFunction() = default;
  TestFamily family_ = TestFamily::CUSTOM;
  std::function<ProfileEval(double, double)> profile_;
  std::function<double(const Vec&, double)> general_;
  double lo_ = 0.0;
  double hi_ = std::numeric_limits<double>::infinity();
  std::vector<double> breaks_;
};

struct IntegralResult {
  double value;
  double error;  // |value - value at halved resolutions|
};

namespace detail {

// Clip the quadrature window to the function support; empty -> zero.
inline bool clip_radial(const TestFunction& u, const QuadratureSpec& spec,
                        double& r_lo, double& r_hi) {
  r_lo = std::max(spec.r_in, u.support_lo());
  r_hi = std::min(spec.r_out, u.support_hi());
  return r_hi > r_lo * (1.0 + 1e-14);
}

inline double domain_integral_once(
    const std::function<double(double, double)>& g_axisym,
    const std::function<double(const Vec&, double)>& g_general,
    const TestFunction& u, const FinslerNorm& H, const QuadratureSpec& spec,
    double theta_lo) {
  double r_lo, r_hi;
  if (!clip_radial(u, spec, r_lo, r_hi)) return 0.0;
  QuadratureSpec clipped = spec;
  clipped.r_in = r_lo;
  clipped.r_out = r_hi;
  if (u.axisymmetric())
    return integrate_domain_axisym(g_axisym, H, clipped, theta_lo,
                                   u.radial_breaks());
  return integrate_domain_general(g_general, H, clipped, theta_lo,
                                  u.radial_breaks());
}

// Central-difference gradient of a general test function (CUSTOM fallback).
inline std::pair<Vec, double> general_gradient(const TestFunction& u,
                                               const Vec& x, double t) {
  const double h = 1e-5 * std::max(1.0, std::hypot(norm2(x), t));
  Vec g(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (u.value_general(xp, t) - u.value_general(xm, t)) / (2.0 * h);
  }
  const double gt =
      (u.value_general(x, t + h) - u.value_general(x, t - h)) / (2.0 * h);
  return {g, gt};
}

template <typename F>
IntegralResult with_refinement(const F& eval, const QuadratureSpec& spec) {
  const double full = eval(spec);
  const double coarse = eval(spec.halved());
  const double err = std::abs(full - coarse);
  if (err > 10.0 * spec.target * std::max(std::abs(full), 1e-12))
    throw Error(ErrorCode::QUADRATURE_NOT_CONVERGED,
                "refinement step moved the integral by " +
                    std::to_string(err) + " (value " + std::to_string(full) +
                    ")");
  return {full, err};
}

}  // namespace detail

// \int Phi(grad u)^2 over the truncated domain {theta > theta_lo}.
inline IntegralResult energy_integral(const TestFunction& u,
                                      const FinslerNorm& H,
                                      const QuadratureSpec& spec,
                                      double theta_lo = 0.0) {
  spec.validate();
  auto eval = [&](const QuadratureSpec& q) {
    auto axisym = [&](double rho, double theta) {
      const auto p = u.profile(rho, theta);
      const double c = p.d_rho * std::cos(theta) -
                       p.d_theta * std::sin(theta) / rho;
      const double ut = p.d_rho * std::sin(theta) +
                        p.d_theta * std::cos(theta) / rho;
      return c * c + ut * ut;
    };
    auto general = [&](const Vec& x, double t) {
      const auto [gx, gt] = detail::general_gradient(u, x, t);
      const double hx = H.value(gx);
      return hx * hx + gt * gt;
    };
    return detail::domain_integral_once(axisym, general, u, H, q, theta_lo);
  };
  return detail::with_refinement(eval, spec);
}

// (beta-2)^2/4 \int u^2 / Phi0^2 over the truncated domain.
inline IntegralResult hardy_integral(const TestFunction& u,
                                     const FinslerNorm& H, double beta,
                                     const QuadratureSpec& spec,
                                     double theta_lo = 0.0) {
  spec.validate();
  const double coef = 0.25 * (beta - 2.0) * (beta - 2.0);
  if (coef == 0.0) return {0.0, 0.0};
  auto eval = [&](const QuadratureSpec& q) {
    auto axisym = [&](double rho, double theta) {
      const double v = u.profile(rho, theta).value;
      return v * v / (rho * rho);
    };
    auto general = [&](const Vec& x, double t) {
      const double rho = std::hypot(H.dual_value(x), t);
      const double v = u.value_general(x, t);
      return v * v / (rho * rho);
    };
    return coef *
           detail::domain_integral_once(axisym, general, u, H, q, theta_lo);
  };
  return detail::with_refinement(eval, spec);
}

// \int u(x, tan(alpha) H0(x))^2 / H0(x) dx over the boundary annulus; the
// half-space boundary is alpha = 0.  (Surface-measure factors against the
// slanted cone cancel, leaving the plain x-plane integral.)
inline IntegralResult boundary_integral(const TestFunction& u,
                                        const FinslerNorm& H,
                                        const QuadratureSpec& spec,
                                        double alpha = 0.0) {
  spec.validate();
  const double c = std::cos(alpha);
  auto eval = [&](const QuadratureSpec& q) {
    double r_lo, r_hi;
    if (!detail::clip_radial(u, q, r_lo, r_hi)) return 0.0;
    std::vector<double> breaks;
    for (double s : u.radial_breaks()) breaks.push_back(s + std::log(c));
    if (u.axisymmetric()) {
      auto g = [&](double r) {
        const double v = u.profile(r / c, alpha).value;
        return v * v / r;
      };
      return integrate_boundary_radial(g, H, q, r_lo * c, r_hi * c, breaks);
    }
    // General path: the boundary integrand still only needs values along
    // each direction, so run the radial driver per sphere point.
    const auto chart = sphere_chart(H.dim(), q.n_sphere);
    const double n = static_cast<double>(H.dim());
    std::vector<double> terms;
    terms.reserve(chart.size());
    for (const auto& p : chart) {
      const double h0 = H.dual_value(p.omega);
      const Vec unit = p.omega * (1.0 / h0);
      auto radial = [&](double s) {
        const double r = std::exp(s);
        const double v = u.value_general(unit * r, std::tan(alpha) * r);
        return v * v / r * std::pow(r, n);
      };
      terms.push_back(p.weight / std::pow(h0, n) *
                      detail::composite_panels(radial, std::log(r_lo * c),
                                               std::log(r_hi * c), breaks,
                                               q.n_radial));
    }
    return pairwise_sum(std::move(terms));
  };
  return detail::with_refinement(eval, spec);
}

struct InequalityReport {
  double lhs_boundary;    // K * boundary integral
  double rhs_energy;      // energy integral
  double hardy_term;      // (beta-2)^2/4 * hardy integral
  double slack;           // rhs_energy - hardy_term - lhs_boundary
  double error_estimate;  // summed refinement deltas
};

inline InequalityReport check_inequality_cone(const TestFunction& u,
                                              const FinslerNorm& H,
                                              double beta, double alpha,
                                              const QuadratureSpec& spec) {
  const int N = static_cast<int>(H.dim()) + 1;
  const double K = sharp_constant_cone(N, beta, alpha);
  const IntegralResult E = energy_integral(u, H, spec, alpha);
  const IntegralResult Hd = hardy_integral(u, H, beta, spec, alpha);
  const IntegralResult B = boundary_integral(u, H, spec, alpha);
  InequalityReport rep;
  rep.rhs_energy = E.value;
  rep.hardy_term = Hd.value;
  rep.lhs_boundary = K * B.value;
  rep.slack = rep.rhs_energy - rep.hardy_term - rep.lhs_boundary;
  rep.error_estimate = E.error + Hd.error + std::abs(K) * B.error;
  return rep;
}

inline InequalityReport check_inequality_halfspace(const TestFunction& u,
                                                   const FinslerNorm& H,
                                                   double beta,
                                                   const QuadratureSpec& spec) {
  return check_inequality_cone(u, H, beta, 0.0, spec);
}

// (energy - hardy) / boundary; the quantity whose infimum over u is the
// sharp constant.
inline double rayleigh_quotient(const TestFunction& u, const FinslerNorm& H,
                                double beta, const QuadratureSpec& spec,
                                double alpha = 0.0) {
  const IntegralResult E = energy_integral(u, H, spec, alpha);
  const IntegralResult Hd = hardy_integral(u, H, beta, spec, alpha);
  const IntegralResult B = boundary_integral(u, H, spec, alpha);
  if (std::abs(B.value) < 1e-14)
    throw Error(ErrorCode::ZERO_BOUNDARY_TRACE,
                "Rayleigh quotient needs a nonzero boundary trace");
  return (E.value - Hd.value) / B.value;
}

}  // namespace fhk
