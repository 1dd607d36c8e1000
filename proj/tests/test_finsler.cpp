#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fhk/finsler.hpp"

using Catch::Approx;
using namespace fhk;

namespace {
Vec random_vec(SplitMix64& rng, std::size_t d, double lo = -2.0, double hi = 2.0) {
    Vec v(d);
    for (auto& c : v) c = rng.uniform(lo, hi);
    return v;
}

Mat example_spd3() {
    // diag(1,2,3) rotated slightly off-axis; stays SPD
    Mat m(3);
    m(0, 0) = 1.3; m(0, 1) = 0.2; m(0, 2) = -0.1;
    m(1, 0) = 0.2; m(1, 1) = 2.1; m(1, 2) = 0.3;
    m(2, 0) = -0.1; m(2, 1) = 0.3; m(2, 2) = 2.9;
    return m;
}
}  // namespace

TEST_CASE("euclidean norm basics") {
    auto H = FinslerNorm::euclidean(3);
    Vec xi{3.0, 0.0, 4.0};
    CHECK(H.value(xi) == Approx(5.0).epsilon(1e-15));
    CHECK(H.dual_value(xi) == Approx(5.0).epsilon(1e-15));
    CHECK(H.gamma1() == 1.0);
    CHECK(H.gamma2() == 1.0);
    CHECK(gradient_identity_residual(H, xi, Vec{1.0, -2.0, 0.5}) < 1e-14);
}

TEST_CASE("weighted quadratic norm: closed forms and identities") {
    auto H = FinslerNorm::weighted_quadratic(Mat::diag(Vec{1.0, 2.0, 3.0}));
    Vec xi{1.0, 1.0, 1.0};
    CHECK(H.value(xi) == Approx(std::sqrt(6.0)).epsilon(1e-14));
    CHECK(H.dual_value(xi) == Approx(std::sqrt(1.0 + 0.5 + 1.0 / 3.0)).epsilon(1e-14));
    CHECK(H.gamma1() == Approx(1.0).epsilon(1e-12));
    CHECK(H.gamma2() == Approx(std::sqrt(3.0)).epsilon(1e-12));

    auto G = FinslerNorm::weighted_quadratic(example_spd3());
    SplitMix64 rng(17);
    for (int k = 0; k < 50; ++k) {
        const Vec a = random_vec(rng, 3), b = random_vec(rng, 3);
        CHECK(gradient_identity_residual(G, a, b) < 1e-11);
        CHECK(cauchy_schwarz_excess(G, a, b) < 1e-12);
    }
}

TEST_CASE("weighted quadratic norm: polar of the polar is the norm") {
    const Mat M = example_spd3();
    auto H = FinslerNorm::weighted_quadratic(M);
    auto Hpolar = FinslerNorm::weighted_quadratic(inverse_spd(M));
    SplitMix64 rng(29);
    for (int k = 0; k < 20; ++k) {
        const Vec v = random_vec(rng, 3);
        CHECK(H.dual_value(v) == Approx(Hpolar.value(v)).epsilon(1e-12));
        CHECK(Hpolar.dual_value(v) == Approx(H.value(v)).epsilon(1e-12));
    }
}

TEST_CASE("p-norm: conjugate exponent duality") {
    auto H = FinslerNorm::p_norm(3.0, 3);
    Vec x{1.0, -2.0, 0.5};
    const double q = 1.5;
    double qn = std::pow(std::pow(1.0, q) + std::pow(2.0, q) + std::pow(0.5, q), 1.0 / q);
    CHECK(H.dual_value(x) == Approx(qn).epsilon(1e-14));

    SplitMix64 rng(41);
    for (int k = 0; k < 50; ++k) {
        const Vec a = random_vec(rng, 3), b = random_vec(rng, 3);
        CHECK(gradient_identity_residual(H, a, b) < 1e-11);
        CHECK(cauchy_schwarz_excess(H, a, b) < 1e-12);
        // comparison bounds against the euclidean length
        const double e = norm2(a);
        CHECK(H.value(a) >= H.gamma1() * e - 1e-12);
        CHECK(H.value(a) <= H.gamma2() * e + 1e-12);
    }
}

TEST_CASE("p-norm: homogeneity and gradient scaling invariance") {
    auto H = FinslerNorm::p_norm(2.5, 2);
    SplitMix64 rng(53);
    for (int k = 0; k < 30; ++k) {
        const Vec a = random_vec(rng, 2);
        if (norm2(a) < 1e-3) continue;
        const double lam = rng.uniform(0.1, 5.0);
        CHECK(H.value(lam * a) == Approx(lam * H.value(a)).epsilon(1e-13));
        const Vec g1 = H.gradient(a), g2 = H.gradient(lam * a);
        for (std::size_t i = 0; i < 2; ++i) CHECK(g2[i] == Approx(g1[i]).margin(1e-12));
    }
}

TEST_CASE("custom norm: matches its closed-form counterpart") {
    // wrap the 3-norm as an opaque callback and compare everything
    auto ref = FinslerNorm::p_norm(3.0, 3);
    auto H = FinslerNorm::custom(
        [](const Vec& v) {
            return std::cbrt(std::abs(v[0] * v[0] * v[0]) + std::abs(v[1] * v[1] * v[1]) +
                             std::abs(v[2] * v[2] * v[2]));
        },
        3);
    SplitMix64 rng(67);
    for (int k = 0; k < 12; ++k) {
        const Vec a = random_vec(rng, 3);
        if (norm2(a) < 0.2) continue;
        CHECK(H.value(a) == Approx(ref.value(a)).epsilon(1e-13));
        CHECK(H.dual_value(a) == Approx(ref.dual_value(a)).epsilon(1e-7));
        const Vec g = H.gradient(a), gr = ref.gradient(a);
        for (std::size_t i = 0; i < 3; ++i) CHECK(g[i] == Approx(gr[i]).margin(1e-9));
        const Vec dg = H.dual_gradient(a), dgr = ref.dual_gradient(a);
        for (std::size_t i = 0; i < 3; ++i) CHECK(dg[i] == Approx(dgr[i]).margin(1e-6));
    }
    // sampled comparison bounds bracket the truth
    CHECK(H.gamma1() <= ref.gamma1() + 1e-9);
    CHECK(H.gamma2() >= ref.gamma2() - 1e-9);
}

TEST_CASE("product norm: values, gradients, eikonal identity") {
    auto H = FinslerNorm::weighted_quadratic(Mat::diag(Vec{1.0, 2.0, 3.0}));
    ProductNorm Phi(H);
    Vec x{0.7, -0.4, 1.1};
    const double t = -0.8;
    CHECK(Phi.dual_value(x, t) == Approx(std::hypot(H.dual_value(x), t)).epsilon(1e-14));
    CHECK(Phi.value(x, t) == Approx(std::hypot(H.value(x), t)).epsilon(1e-14));

    // Phi(grad Phi0) = 1 wherever Phi0 is smooth
    SplitMix64 rng(79);
    for (int k = 0; k < 25; ++k) {
        const Vec a = random_vec(rng, 3);
        const double tt = rng.uniform(-2.0, 2.0);
        if (std::hypot(norm2(a), tt) < 0.1) continue;
        auto [gx, gt] = Phi.dual_gradient(a, tt);
        CHECK(Phi.value(gx, gt) == Approx(1.0).epsilon(1e-11));
        // Euler relation for the product norm
        auto [vx, vt] = Phi.gradient(a, tt);
        CHECK(dot(vx, a) + vt * tt == Approx(Phi.value(a, tt)).epsilon(1e-11));
    }
}

TEST_CASE("norm error conditions") {
    auto H = FinslerNorm::euclidean(2);
    CHECK_THROWS_AS(H.gradient(Vec{0.0, 0.0}), Error);
    CHECK_THROWS_AS(FinslerNorm::p_norm(1.0, 2), Error);
    CHECK_THROWS_AS(FinslerNorm::p_norm(0.5, 2), Error);
    CHECK_THROWS_AS(FinslerNorm::euclidean(5), Error);
    // non-SPD matrix rejected
    Mat bad(2);
    bad(0, 0) = 1.0; bad(0, 1) = 2.0; bad(1, 0) = 2.0; bad(1, 1) = 1.0;
    CHECK_THROWS_AS(FinslerNorm::weighted_quadratic(bad), Error);
}

TEST_CASE("homogeneity holds to machine precision across families") {
    SplitMix64 rng(0x8BADF00D1234ULL);
    std::vector<FinslerNorm> families;
    families.push_back(FinslerNorm::euclidean(3));
    families.push_back(FinslerNorm::weighted_quadratic(example_spd3()));
    families.push_back(FinslerNorm::p_norm(2.5, 3));
    for (const auto& H : families) {
        for (int trial = 0; trial < 1000; ++trial) {
            Vec xi = random_vec(rng, 3);
            if (norm2(xi) < 1e-3) continue;
            const double lambda = rng.uniform(-4.0, 4.0);
            const double lhs = H.value(xi * lambda);
            const double rhs = std::abs(lambda) * H.value(xi);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * H.value(xi) * std::abs(lambda) + 1e-15);
        }
    }
}

TEST_CASE("triangle inequality on random samples") {
    SplitMix64 rng(0xDEADBEA7F00DULL);
    std::vector<FinslerNorm> families;
    families.push_back(FinslerNorm::euclidean(3));
    families.push_back(FinslerNorm::weighted_quadratic(example_spd3()));
    families.push_back(FinslerNorm::p_norm(1.5, 3));
    families.push_back(FinslerNorm::p_norm(4.0, 3));
    for (const auto& H : families) {
        for (int trial = 0; trial < 500; ++trial) {
            Vec a = random_vec(rng, 3);
            Vec b = random_vec(rng, 3);
            CHECK(H.value(a + b) <= H.value(a) + H.value(b) + 1e-12);
        }
    }
}

TEST_CASE("bipolar identity for a callback norm via nested numerical sup") {
    // Build the polar of a custom norm as another custom norm, then check
    // that taking the polar twice returns the original values.
    auto base = FinslerNorm::custom(
        [](const Vec& v) {
            double s = 0.0;
            for (double c : v) s += std::abs(c * c * c);
            return std::cbrt(s);
        },
        3);
    auto three = FinslerNorm::p_norm(3.0, 3);
    auto polar_cb = [base](const Vec& x) { return base.dual_value(x); };
    auto polar = FinslerNorm::custom(polar_cb, 3);
    const Vec probes[] = {{1.0, 0.0, 0.0}, {0.6, -0.8, 0.2}, {-0.3, 0.5, 1.1}};
    for (const Vec& xi : probes) {
        const double bipolar = polar.dual_value(xi);
        CHECK(std::abs(bipolar - base.value(xi)) <= 1e-6 * base.value(xi));
        CHECK(std::abs(base.value(xi) - three.value(xi)) <= 1e-12);
    }
}

TEST_CASE("dual norm inherits reciprocal comparability bounds") {
    // gamma1 |xi| <= H(xi) <= gamma2 |xi| implies
    // (1/gamma2) |x| <= H0(x) <= (1/gamma1) |x|.
    SplitMix64 rng(0x1CEB00DA5678ULL);
    std::vector<FinslerNorm> families;
    families.push_back(FinslerNorm::weighted_quadratic(example_spd3()));
    families.push_back(FinslerNorm::p_norm(3.0, 3));
    families.push_back(FinslerNorm::p_norm(1.5, 3));
    for (const auto& H : families) {
        const double g1 = H.gamma1();
        const double g2 = H.gamma2();
        for (int trial = 0; trial < 200; ++trial) {
            Vec x = random_vec(rng, 3);
            if (norm2(x) < 1e-3) continue;
            const double h0 = H.dual_value(x);
            CHECK(h0 >= norm2(x) / g2 * (1.0 - 1e-12));
            CHECK(h0 <= norm2(x) / g1 * (1.0 + 1e-12));
        }
    }
}
