#pragma once

// Gamma, digamma, and the Gauss hypergeometric function F(a,b;c;y) on y < 1,
// including the behavior of F at the boundary y -> 1^- that drives everything
// else in this library: the sharp constants are gamma-function ratios and the
// angular profiles are linear combinations of two hypergeometric branches.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "fhk/error.hpp"

namespace fhk {

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients. Relative error < 1e-14 over
// the real line away from poles.
inline constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

inline bool is_nonpositive_integer(double x, double tol = 1e-12) {
    return x <= tol && std::abs(x - std::round(x)) < tol;
}

inline bool is_integer(double x, double tol = 1e-12) {
    return std::abs(x - std::round(x)) < tol;
}

inline double gamma_positive(double x) {
    // x >= 0.5 assumed
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x - 1.0 + i);
    const double t = x + 6.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, x - 0.5) * std::exp(-t) * acc;
}

}  // namespace detail

// Gamma function. Throws at the poles 0, -1, -2, ...
inline double gamma_fn(double x) {
    if (detail::is_nonpositive_integer(x))
        throw Error(ErrorCode::POLE_AT_NONPOSITIVE_INTEGER,
                    "gamma(" + std::to_string(x) + ")");
    if (x < 0.5) {
        // reflection: gamma(x) gamma(1-x) = pi / sin(pi x)
        return M_PI / (std::sin(M_PI * x) * detail::gamma_positive(1.0 - x));
    }
    return detail::gamma_positive(x);
}

// Reciprocal gamma, entire: returns 0 at the poles of gamma.
inline double rgamma(double x) {
    if (detail::is_nonpositive_integer(x)) return 0.0;
    return 1.0 / gamma_fn(x);
}

// Digamma (logarithmic derivative of gamma). Same pole set as gamma.
inline double digamma(double x) {
    if (detail::is_nonpositive_integer(x))
        throw Error(ErrorCode::POLE_AT_NONPOSITIVE_INTEGER,
                    "digamma(" + std::to_string(x) + ")");
    if (x < 0.5) return digamma(1.0 - x) - M_PI / std::tan(M_PI * x);
    double acc = 0.0;
    while (x < 12.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic expansion with Bernoulli coefficients through x^-14
    const double inv = 1.0 / x, inv2 = inv * inv;
    double s = std::log(x) - 0.5 * inv;
    s -= inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 *
         (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 * (1.0 / 12)))))));
    return acc + s;
}

namespace detail {

// Direct power series for F(a,b;c;y). Caller guarantees |y| <= 0.5 (or a
// terminating numerator parameter). Convergence: three consecutive terms
// below 1e-16 * |partial sum|; hard cap guards against parameter abuse.
inline double hyp2f1_series(double a, double b, double c, double y,
                            long cap = 100000) {
    double term = 1.0, sum = 1.0;
    int small_streak = 0;
    for (long k = 0; k < cap; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * y;
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) {
            if (++small_streak >= 3) return sum;
        } else {
            small_streak = 0;
        }
    }
    throw Error(ErrorCode::NO_CONVERGENCE, "hypergeometric series cap reached");
}

// Finite sum when a is a nonpositive integer -a = m: polynomial of degree m.
inline double hyp2f1_terminating(double a, double b, double c, double y) {
    const long m = static_cast<long>(std::llround(-a));
    double term = 1.0, sum = 1.0;
    for (long k = 0; k < m; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * y;
        sum += term;
    }
    return sum;
}

// Connection formula for non-integer s = c-a-b, evaluated in w = 1-y.
inline double hyp2f1_link_noninteger(double a, double b, double c, double y) {
    const double w = 1.0 - y;
    const double s = c - a - b;
    double t1 = gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b);
    if (t1 != 0.0) t1 *= hyp2f1_series(a, b, a + b - c + 1.0, w);
    double t2 = gamma_fn(c) * gamma_fn(-s) * rgamma(a) * rgamma(b);
    if (t2 != 0.0) t2 *= std::pow(w, s) * hyp2f1_series(c - a, c - b, s + 1.0, w);
    return t1 + t2;
}

// c = a+b: logarithmic case, leading behavior -log(1-y).
inline double hyp2f1_link_log0(double a, double b, double y, long cap = 100000) {
    const double w = 1.0 - y;
    const double lw = std::log(w);
    const double pref = gamma_fn(a + b) * rgamma(a) * rgamma(b);
    double coef = 1.0, sum = 0.0;
    for (long n = 0; n < cap; ++n) {
        const double bracket =
            2.0 * digamma(n + 1.0) - digamma(a + n) - digamma(b + n) - lw;
        const double t = coef * bracket;
        sum += t;
        if (n > 2 && std::abs(t) < 1e-16 * std::abs(sum)) return pref * sum;
        coef *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0)) * w;
    }
    throw Error(ErrorCode::NO_CONVERGENCE, "log-case hypergeometric series cap reached");
}

// c = a+b-m with integer m >= 1: pole of order m at y=1 plus a log series.
inline double hyp2f1_link_logneg(double a, double b, double c, long m, double y,
                                 long cap = 100000) {
    const double w = 1.0 - y;
    const double lw = std::log(w);
    double coef = 1.0, fin = 0.0;
    for (long n = 0; n < m; ++n) {
        fin += coef;
        if (n < m - 1)
            coef *= (a - m + n) * (b - m + n) / ((n + 1.0) * (1.0 - m + n)) * w;
    }
    const double t1 =
        gamma_fn(static_cast<double>(m)) * gamma_fn(c) * rgamma(a) * rgamma(b) *
        std::pow(w, -static_cast<double>(m)) * fin;
    const double pref =
        (m % 2 == 0 ? 1.0 : -1.0) * gamma_fn(c) * rgamma(a - m) * rgamma(b - m);
    if (pref == 0.0) return t1;
    double fact_m = 1.0;
    for (long i = 2; i <= m; ++i) fact_m *= i;
    coef = 1.0 / fact_m;
    double sum = 0.0;
    for (long n = 0; n < cap; ++n) {
        const double bracket = lw - digamma(n + 1.0) - digamma(n + m + 1.0) +
                               digamma(a + n) + digamma(b + n);
        const double t = coef * bracket;
        sum += t;
        if (n > 2 && std::abs(t) < 1e-16 * std::abs(sum)) return t1 - pref * sum;
        coef *= (a + n) * (b + n) / ((n + 1.0) * (n + m + 1.0)) * w;
    }
    throw Error(ErrorCode::NO_CONVERGENCE, "log-case hypergeometric series cap reached");
}

// c = a+b+m with integer m >= 1: finite value at y=1, log correction at order m.
inline double hyp2f1_link_logpos(double a, double b, double c, long m, double y,
                                 long cap = 100000) {
    const double w = 1.0 - y;
    const double lw = std::log(w);
    double coef = 1.0, fin = 0.0;
    for (long n = 0; n < m; ++n) {
        fin += coef;
        if (n < m - 1)
            coef *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n)) * w;
    }
    const double t1 = gamma_fn(static_cast<double>(m)) * gamma_fn(c) *
                      rgamma(a + m) * rgamma(b + m) * fin;
    const double pref = (m % 2 == 0 ? 1.0 : -1.0) * gamma_fn(c) * rgamma(a) *
                        rgamma(b) * std::pow(w, static_cast<double>(m));
    if (pref == 0.0) return t1;
    double fact_m = 1.0;
    for (long i = 2; i <= m; ++i) fact_m *= i;
    coef = 1.0 / fact_m;
    double sum = 0.0;
    for (long n = 0; n < cap; ++n) {
        const double bracket = lw - digamma(n + 1.0) - digamma(n + m + 1.0) +
                               digamma(a + m + n) + digamma(b + m + n);
        const double t = coef * bracket;
        sum += t;
        if (n > 2 && std::abs(t) < 1e-16 * std::abs(sum)) return t1 - pref * sum;
        coef *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * w;
    }
    throw Error(ErrorCode::NO_CONVERGENCE, "log-case hypergeometric series cap reached");
}

}  // namespace detail

// Gauss hypergeometric function F(a,b;c;y) for y < 1.
//
// Regimes: direct series for y <= 0.5; for 0.5 < y < 1 the series in 1-y via
// the connection formulas (split on whether c-a-b is a negative integer, zero,
// a positive integer, or non-integer). Terminating polynomial cases are
// detected first and work for any y. Integer detection uses a 1e-12 tolerance;
// parameters that are nearly but not exactly integers lose accuracy to
// cancellation between the two connection terms, which is inherent to the
// formulas, not to this implementation.
inline double hyp2f1(double a, double b, double c, double y) {
    if (detail::is_nonpositive_integer(c))
        throw Error(ErrorCode::POLE_AT_NONPOSITIVE_INTEGER,
                    "hyp2f1 with c = " + std::to_string(c));
    if (y >= 1.0)
        throw Error(ErrorCode::OUT_OF_DOMAIN,
                    "hyp2f1 requires y < 1, got " + std::to_string(y));
    if (y <= -1.0)
        throw Error(ErrorCode::OUT_OF_DOMAIN,
                    "hyp2f1 requires y > -1, got " + std::to_string(y));
    if (detail::is_nonpositive_integer(a)) {
        const double r = detail::hyp2f1_terminating(std::round(a), b, c, y);
        return r;
    }
    if (detail::is_nonpositive_integer(b)) {
        return detail::hyp2f1_terminating(std::round(b), a, c, y);
    }
    if (y <= 0.5) return detail::hyp2f1_series(a, b, c, y);

    const double s = c - a - b;
    if (!detail::is_integer(s)) return detail::hyp2f1_link_noninteger(a, b, c, y);
    const long m = static_cast<long>(std::llround(s));
    if (m == 0) return detail::hyp2f1_link_log0(a, b, y);
    if (m < 0) return detail::hyp2f1_link_logneg(a, b, c, -m, y);
    return detail::hyp2f1_link_logpos(a, b, c, m, y);
}

// d/dy F(a,b;c;y) = (ab/c) F(a+1,b+1;c+1;y).
inline double hyp2f1_derivative(double a, double b, double c, double y) {
    return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, y);
}

// How F(a,b;c;y) behaves as y -> 1^-.
enum class BoundaryClass {
    CONVERGENT,      // c-a-b > 0: finite limit (the Gauss value)
    LOG_DIVERGENT,   // c-a-b = 0: F ~ coefficient * (-log(1-y))
    POWER_DIVERGENT, // c-a-b < 0: F ~ coefficient * (1-y)^{c-a-b}
};

struct BoundaryBehavior {
    BoundaryClass cls;
    // CONVERGENT:      lim_{y->1} F
    // LOG_DIVERGENT:   lim F / (-log(1-y))
    // POWER_DIVERGENT: lim F * (1-y)^{a+b-c}
    double coefficient;
};

inline BoundaryBehavior boundary_behavior(double a, double b, double c) {
    const double s = c - a - b;
    if (s > 1e-12) {
        // Gauss: F(a,b;c;1) = gamma(c) gamma(c-a-b) / (gamma(c-a) gamma(c-b))
        return {BoundaryClass::CONVERGENT,
                gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b)};
    }
    if (s > -1e-12) {
        return {BoundaryClass::LOG_DIVERGENT, gamma_fn(a + b) * rgamma(a) * rgamma(b)};
    }
    return {BoundaryClass::POWER_DIVERGENT,
            gamma_fn(c) * gamma_fn(-s) * rgamma(a) * rgamma(b)};
}

}  // namespace fhk
