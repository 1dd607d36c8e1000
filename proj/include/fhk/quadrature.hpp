#pragma once

// Tensor Gauss-Legendre quadrature over half-space and cone annuli
// {r_in < Phi0(x,t) < r_out, theta > theta_lo} in the coordinates
//
//   x = rho cos(theta) * omega / H0(omega),   t = rho sin(theta),
//
// with omega running over the Euclidean unit sphere of the x-space
// (dimension n = N-1).  The volume element is
//
//   dx dt = rho^{N-1} cos^{n-1}(theta) * [J_euc(psi) / H0(omega(psi))^n]
//           drho dtheta dpsi,
//
// where J_euc is the ordinary spherical chart factor.  The anisotropy enters
// only through the scalar H0(omega)^{-n}: writing the chart columns of
// d(omega/H0)/dpsi and adding multiples of the radial column removes every
// tangential derivative of H0 from the determinant, so the factor is exact —
// no numerical differentiation of the chart is involved.
//
// The radial variable is integrated as s = log(rho) on composite panels
// split at caller-supplied breakpoints (cutoff edges and the like).  Sums
// are accumulated per cell in a fixed order and reduced pairwise, so results
// are bit-stable and independent of the number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "fhk/error.hpp"
#include "fhk/finsler.hpp"
#include "fhk/linalg.hpp"

namespace fhk {

struct Rule1D {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // summing to 2
};

// Gauss-Legendre rule by Newton iteration on the Legendre recurrence.
inline Rule1D gauss_legendre(int n) {
  if (n < 1)
    throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                "quadrature order must be positive");
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess for the i-th root (descending order).
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.weights[i] = w;
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

// Deterministic pairwise reduction.
inline double pairwise_sum(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::size_t m = v.size();
  while (m > 1) {
    const std::size_t half = (m + 1) / 2;
    for (std::size_t i = 0; i < m / 2; ++i) v[i] = v[2 * i] + v[2 * i + 1];
    if (m % 2 == 1) v[m / 2] = v[m - 1];
    m = half;
  }
  return v[0];
}

// One point of a spherical chart: Euclidean direction, combined chart weight
// (quadrature weight times J_euc).
struct SpherePoint {
  Vec omega;
  double weight;
};

// Tensor chart of the Euclidean unit sphere S^{n-1}, n = 2..4.  Azimuthal
// (periodic) directions use uniform midpoint grids, polar directions
// Gauss-Legendre.
inline std::vector<SpherePoint> sphere_chart(std::size_t dim, int n_sphere) {
  if (dim < 2 || dim > 4)
    throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                "sphere chart dimension must be 2..4");
  if (n_sphere < 4)
    throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                "sphere resolution must be at least 4");
  std::vector<SpherePoint> pts;
  const int n_az = 2 * n_sphere;
  const double w_az = 2.0 * M_PI / n_az;
  if (dim == 2) {
    const double w = 2.0 * M_PI / n_sphere;
    for (int i = 0; i < n_sphere; ++i) {
      const double a = w * (i + 0.5);
      pts.push_back({{std::cos(a), std::sin(a)}, w});
    }
    return pts;
  }
  const Rule1D gl = gauss_legendre(n_sphere);
  if (dim == 3) {
    for (int i = 0; i < n_sphere; ++i) {
      const double p1 = 0.5 * M_PI * (gl.nodes[i] + 1.0);
      const double wp = 0.5 * M_PI * gl.weights[i] * std::sin(p1);
      for (int j = 0; j < n_az; ++j) {
        const double p2 = w_az * (j + 0.5);
        pts.push_back({{std::sin(p1) * std::cos(p2),
                        std::sin(p1) * std::sin(p2), std::cos(p1)},
                       wp * w_az});
      }
    }
    return pts;
  }
  for (int i = 0; i < n_sphere; ++i) {
    const double p1 = 0.5 * M_PI * (gl.nodes[i] + 1.0);
    const double w1 =
        0.5 * M_PI * gl.weights[i] * std::sin(p1) * std::sin(p1);
    for (int j = 0; j < n_sphere; ++j) {
      const double p2 = 0.5 * M_PI * (gl.nodes[j] + 1.0);
      const double w2 = 0.5 * M_PI * gl.weights[j] * std::sin(p2);
      for (int k = 0; k < n_az; ++k) {
        const double p3 = w_az * (k + 0.5);
        pts.push_back(
            {{std::cos(p1), std::sin(p1) * std::cos(p2),
              std::sin(p1) * std::sin(p2) * std::cos(p3),
              std::sin(p1) * std::sin(p2) * std::sin(p3)},
             w1 * w2 * w_az});
      }
    }
  }
  return pts;
}

// Spherical factor of every axially symmetric integral:
//   mass = \int_{S^{n-1}} H0(omega)^{-n} domega = n * vol{H0 <= 1}.
// The standard families have closed forms (sphere area, ellipsoid volume
// via det M, Dirichlet's volume of the dual l^q ball), which keeps the
// anisotropic factor exact at any resolution.  Only CUSTOM norms integrate
// the chart factor J/H0^n numerically — their dual values come from an
// iterative ascent anyway, so chart error is not the accuracy floor there.
inline double sphere_mass(const FinslerNorm& H, int n_sphere) {
  const double n = static_cast<double>(H.dim());
  const double area = 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
  switch (H.kind()) {
    case NormKind::EUCLIDEAN:
      return area;
    case NormKind::WEIGHTED_QUADRATIC: {
      double det = 1.0;
      for (double ev : symmetric_eigenvalues(H.weight_matrix())) det *= ev;
      return area * std::sqrt(det);
    }
    case NormKind::P_NORM: {
      const double q = H.p_exponent() / (H.p_exponent() - 1.0);
      return n * std::pow(2.0 * std::tgamma(1.0 + 1.0 / q), n) /
             std::tgamma(1.0 + n / q);
    }
    case NormKind::CUSTOM:
      break;
  }
  const auto pts = sphere_chart(H.dim(), n_sphere);
  std::vector<double> terms;
  terms.reserve(pts.size());
  for (const auto& p : pts)
    terms.push_back(p.weight / std::pow(H.dual_value(p.omega), n));
  return pairwise_sum(std::move(terms));
}

// Worker-thread count: FH_THREADS if set, else 1.  Results do not depend on
// the value (per-panel sums are sequential, the final reduction is ordered).
inline int quadrature_threads() {
  if (const char* env = std::getenv("FH_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, 64);
  }
  return 1;
}

namespace detail {

// Split [a, b] at the interior breakpoints (integrand kinks).  Gauss-Legendre
// converges spectrally on each analytic piece whatever its length, so no
// further subdivision is applied; the per-panel order carries the radial
// resolution, which keeps refinement-by-halving meaningful.
inline std::vector<double> panel_edges(double a, double b,
                                       std::vector<double> breaks) {
  std::vector<double> edges{a};
  std::sort(breaks.begin(), breaks.end());
  for (double c : breaks)
    if (c > a + 1e-12 && c < b - 1e-12) edges.push_back(c);
  edges.push_back(b);
  return edges;
}

// Composite panel integral of f over [a, b] with per-panel Gauss-Legendre of
// order q, split at the given breakpoints.  Work is sharded over radial
// nodes; each cell value lands in a fixed slot and the reduction is ordered,
// so the result does not depend on the thread count.
template <typename F>
double composite_panels(const F& f, double a, double b,
                        const std::vector<double>& breaks, int q) {
  const std::vector<double> edges = panel_edges(a, b, breaks);
  const Rule1D gl = gauss_legendre(q);
  const std::size_t n_panels = edges.size() - 1;
  std::vector<double> terms(n_panels * gl.nodes.size(), 0.0);
  auto run_node = [&](std::size_t idx) {
    const std::size_t p = idx / gl.nodes.size();
    const std::size_t i = idx % gl.nodes.size();
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double rad = 0.5 * (edges[p + 1] - edges[p]);
    terms[idx] = rad * gl.weights[i] * f(mid + rad * gl.nodes[i]);
  };
  const std::size_t total = terms.size();
  const int n_threads =
      std::min<int>(quadrature_threads(), static_cast<int>(total));
  if (n_threads <= 1) {
    for (std::size_t idx = 0; idx < total; ++idx) run_node(idx);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t idx = w; idx < total;
             idx += static_cast<std::size_t>(n_threads))
          run_node(idx);
      });
    }
    for (auto& th : pool) th.join();
  }
  return pairwise_sum(std::move(terms));
}

}  // namespace detail

// Resolution and truncation for every verification integral.
struct QuadratureSpec {
  double r_in = 1e-2;
  double r_out = 1e2;
  int n_radial = 64;   // Gauss-Legendre points per radial panel set
  int n_angular = 32;  // theta points
  int n_sphere = 32;   // per spherical dimension
  double target = 1e-6;  // relative accuracy target for convergence checks

  void validate() const {
    if (!(r_in > 0.0) || !(r_out > r_in))
      throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                  "quadrature truncation needs 0 < r_in < r_out");
    if (n_radial < 4 || n_angular < 4 || n_sphere < 4)
      throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                  "quadrature resolutions must be at least 4");
  }

  QuadratureSpec halved() const {
    QuadratureSpec h = *this;
    h.n_radial = std::max(4, n_radial / 2);
    h.n_angular = std::max(4, n_angular / 2);
    h.n_sphere = std::max(4, n_sphere / 2);
    return h;
  }
};

// Integral over the truncated domain {r_in < rho < r_out, theta_lo < theta
// < pi/2} of an axially symmetric integrand g(rho, theta), including the
// full volume element (spherical mass times rho^N cos^{N-2} theta in
// s = log rho).
inline double integrate_domain_axisym(
    const std::function<double(double, double)>& g, const FinslerNorm& H,
    const QuadratureSpec& spec, double theta_lo,
    const std::vector<double>& s_breaks) {
  spec.validate();
  const int N = static_cast<int>(H.dim()) + 1;
  const double mass = sphere_mass(H, spec.n_sphere);
  const Rule1D gl_t = gauss_legendre(spec.n_angular);
  const double t_mid = 0.5 * (theta_lo + 0.5 * M_PI);
  const double t_rad = 0.5 * (0.5 * M_PI - theta_lo);
  const int q = spec.n_radial;
  auto radial = [&](double s) {
    const double rho = std::exp(s);
    std::vector<double> terms(gl_t.nodes.size());
    for (std::size_t j = 0; j < gl_t.nodes.size(); ++j) {
      const double theta = t_mid + t_rad * gl_t.nodes[j];
      const double w = t_rad * gl_t.weights[j] *
                       std::pow(std::cos(theta), N - 2) *
                       std::pow(rho, static_cast<double>(N));
      terms[j] = w * g(rho, theta);
    }
    return pairwise_sum(std::move(terms));
  };
  const double value = detail::composite_panels(
      radial, std::log(spec.r_in), std::log(spec.r_out), s_breaks, q);
  return mass * value;
}

// Same domain, general integrand g(x, t); the full tensor product including
// the spherical chart. Markedly slower; used for integrands that are not
// functions of (rho, theta) alone.
inline double integrate_domain_general(
    const std::function<double(const Vec&, double)>& g, const FinslerNorm& H,
    const QuadratureSpec& spec, double theta_lo,
    const std::vector<double>& s_breaks) {
  spec.validate();
  const int N = static_cast<int>(H.dim()) + 1;
  const auto chart = sphere_chart(H.dim(), spec.n_sphere);
  // Pre-normalize directions to the anisotropic unit sphere and fold the
  // chart factor H0^{-n} into the weight.
  struct Dir {
    Vec unit;
    double weight;
  };
  std::vector<Dir> dirs;
  dirs.reserve(chart.size());
  const double n = static_cast<double>(H.dim());
  for (const auto& p : chart) {
    const double h0 = H.dual_value(p.omega);
    dirs.push_back({p.omega * (1.0 / h0), p.weight / std::pow(h0, n)});
  }
  const Rule1D gl_t = gauss_legendre(spec.n_angular);
  const double t_mid = 0.5 * (theta_lo + 0.5 * M_PI);
  const double t_rad = 0.5 * (0.5 * M_PI - theta_lo);
  const int q = spec.n_radial;
  auto radial = [&](double s) {
    const double rho = std::exp(s);
    std::vector<double> terms;
    terms.reserve(gl_t.nodes.size() * dirs.size());
    for (std::size_t j = 0; j < gl_t.nodes.size(); ++j) {
      const double theta = t_mid + t_rad * gl_t.nodes[j];
      const double w_t = t_rad * gl_t.weights[j] *
                         std::pow(std::cos(theta), N - 2) *
                         std::pow(rho, static_cast<double>(N));
      const double r_x = rho * std::cos(theta);
      const double t_coord = rho * std::sin(theta);
      for (const auto& d : dirs) {
        terms.push_back(w_t * d.weight * g(d.unit * r_x, t_coord));
      }
    }
    return pairwise_sum(std::move(terms));
  };
  return detail::composite_panels(radial, std::log(spec.r_in),
                                  std::log(spec.r_out), s_breaks, q);
}

// Radial boundary integral: \int g(r) r^{n-1} dr over [r_lo, r_hi] times the
// spherical mass, in s = log r.  Passing g(r) = u(r)^2 / r gives the trace
// integral \int u^2/H0 dx of the half-space inequality.
inline double integrate_boundary_radial(
    const std::function<double(double)>& g, const FinslerNorm& H,
    const QuadratureSpec& spec, double r_lo, double r_hi,
    const std::vector<double>& s_breaks) {
  spec.validate();
  const double n = static_cast<double>(H.dim());
  const double mass = sphere_mass(H, spec.n_sphere);
  const int q = spec.n_radial;
  auto radial = [&](double s) {
    const double r = std::exp(s);
    return std::pow(r, n) * g(r);
  };
  const double value = detail::composite_panels(radial, std::log(r_lo),
                                                std::log(r_hi), s_breaks, q);
  return mass * value;
}

}  // namespace fhk
