#include "ncbesq/kernels.hpp"
#include "ncbesq/quadrature.hpp"
#include "ncbesq/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ncbesq;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
}  // namespace

// Reference values from 40-digit determinant evaluations (mpmath).
TEST_CASE("besq_density reference values") {
    CHECK(rel(kernels::besq_density(BesselParams::from_nu(0), 1.0, 1.0, 2.0), 0.17472016746112833888) < 1e-13);
    CHECK(rel(kernels::besq_density(BesselParams::from_nu(1.5), 0.3, 0.0, 0.4), 0.35038540417617542655) < 1e-13);
    CHECK(rel(kernels::besq_density(BesselParams::from_nu(2), 2.0, 5.0, 1.0), 0.0019320309967970226344) < 1e-13);
    CHECK(rel(kernels::besq_density(BesselParams::from_nu(0.5), 0.01, 1.0, 1.05), 1.9348059531154105127) < 1e-12);
}

TEST_CASE("conditioned, Laguerre and entrance reference values") {
    const auto p0 = BesselParams::from_nu(0), p1 = BesselParams::from_nu(1);
    CHECK(rel(kernels::conditioned_density(p0, DriftSpectrum::of({1, 4}), 1.0, {1, 3}, {2, 5}), 0.0019793823122351582186) <
          1e-12);
    CHECK(rel(kernels::conditioned_density(p1, DriftSpectrum::of({0.5, 2, 3.5}), 0.7, {0.5, 1, 2}, {0.8, 1.5, 3}),
              8.6517316533821873828e-6) < 1e-11);
    CHECK(rel(kernels::laguerre_density(p0, 1.0, {1, 3}, {2, 5}), 0.01121993028993200582) < 1e-12);
    CHECK(rel(kernels::laguerre_density(p1, 0.5, {0, 1}, {0.5, 1.5}), 0.025804499561059012116) < 1e-12);
    CHECK(rel(kernels::entrance_density(p1, DriftSpectrum::of({1, 4}), 1.0, {1, 3}), 0.0022969957915790551887) < 1e-11);
    CHECK(rel(kernels::entrance_density(p0, DriftSpectrum::of({1, 4}), 0.5, {0.3, 2}), 0.16309626446675473647) < 1e-11);
}

TEST_CASE("noncollision probability reference values") {
    const auto s0 = besq_spec(BesselParams::from_nu(0)), s1 = besq_spec(BesselParams::from_nu(1));
    CHECK(rel(kernels::noncollision_prob(s0, {0.25, 1.0}, {1, 6}), 0.63127556785332298471) < 1e-13);
    CHECK(rel(kernels::noncollision_prob(s1, {0.25, 1.0}, {1, 6}), 0.50891630536067879906) < 1e-13);
    CHECK(rel(kernels::noncollision_prob(besq_spec(BesselParams::from_nu(0.5)), {0.1, 0.3, 0.9}, {0.5, 2, 7}),
              0.015287713675869223449) < 1e-11);
    CHECK(kernels::noncollision_prob(s0, {0.5}, {2.0}) == 1.0);
    CHECK_THROWS(kernels::noncollision_prob(s0, {1.0, 0.5}, {1, 2}));
}

TEST_CASE("kernel argument validation") {
    const auto p = BesselParams::from_nu(0);
    const auto mu = DriftSpectrum::of({1, 4});
    CHECK_THROWS_AS(kernels::conditioned_density(p, mu, 1.0, {3, 1}, {1, 2}), std::domain_error);
    CHECK_THROWS_AS(kernels::conditioned_density(p, mu, 1.0, {1, 3}, {0, 2}), std::domain_error);
    CHECK_THROWS_AS(kernels::conditioned_density(p, mu, 0.0, {1, 3}, {1, 2}), std::domain_error);
    CHECK_THROWS(kernels::conditioned_density(p, mu, 1.0, {1, 3, 4}, {1, 2}));
    CHECK_THROWS(DriftSpectrum::of({2, 1}));
    CHECK_THROWS(DriftSpectrum::of({-1, 1}));
}

TEST_CASE("zero spectrum falls back to Laguerre") {
    const auto p = BesselParams::from_nu(1);
    CHECK(kernels::conditioned_density(p, DriftSpectrum::zero(2), 0.8, {0.5, 2}, {1, 3}) ==
          kernels::laguerre_density(p, 0.8, {0.5, 2}, {1, 3}));
}

TEST_CASE("property: N=1 conditioned density is the h-transform of besq_density") {
    Stream s(11, 0);
    for (int k = 0; k < 20; ++k) {
        const double nu = 2.0 * s.uniform(), m = 3.0 * s.uniform() + 0.01;
        const double x = 4.0 * s.uniform(), y = 4.0 * s.uniform() + 0.01, t = 2.0 * s.uniform() + 0.05;
        const auto p = BesselParams::from_nu(nu);
        const auto spec = besq_spec(p);
        const double h = std::exp(-t * m / 2) * spec.psi(m / 2, y) / spec.psi(m / 2, x);
        CHECK(rel(kernels::conditioned_density(p, DriftSpectrum::of({m}), t, {x}, {y}),
                  h * kernels::besq_density(p, t, x, y)) < 1e-12);
    }
}

TEST_CASE("property: symmetry under swapping drift and start at t = 1") {
    Stream s(12, 0);
    auto chamber = [&](std::size_t n, double hi) {
        std::vector<double> v(n);
        for (auto& x : v) x = 0.1 + hi * s.uniform();
        std::sort(v.begin(), v.end());
        return v;
    };
    for (int k = 0; k < 30; ++k) {
        const std::size_t N = 2 + k % 3;
        const auto p = BesselParams::from_nu(double(k % 4) * 0.5);
        const auto x = chamber(N, 4), mu = chamber(N, 4), y = chamber(N, 6);
        const double a = kernels::conditioned_density(p, DriftSpectrum::of(mu), 1.0, x, y);
        const double b = kernels::conditioned_density(p, DriftSpectrum::of(x), 1.0, mu, y);
        CHECK(rel(a, b) < 1e-12);
    }
}

TEST_CASE("property: besq_density x-derivatives match finite differences") {
    const auto p = BesselParams::from_nu(0.5);
    for (double x : {0.5, 2.0})
        for (double y : {0.3, 3.0}) {
            const double h = 1e-4;
            const double fd = (kernels::besq_density(p, 0.7, x + h, y) - kernels::besq_density(p, 0.7, x - h, y)) / (2 * h);
            CHECK(kernels::besq_density_xderiv(p, 1, 0.7, x, y) == doctest::Approx(fd).epsilon(1e-7));
        }
}

TEST_CASE("Chamber2Density marginals and sampling") {
    const auto law = kernels::conditioned_chamber2(BesselParams::from_nu(1), DriftSpectrum::of({1, 4}), 1.0, {1, 4});
    CHECK(law.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    for (int c = 0; c < 2; ++c) {
        CHECK(law.marginal_cdf(c, law.y_max()) == doctest::Approx(law.total_mass()).epsilon(1e-12));
        const double y = 2.5;
        const double pdf_int = quad::integral([&](double v) { return law.marginal_pdf(c, v); }, 0.0, y, 1e-12);
        CHECK(law.marginal_cdf(c, y) == doctest::Approx(pdf_int).epsilon(1e-9));
    }
    CHECK(law.marginal_pdf(0, 2.0) ==
          doctest::Approx(quad::integral([&](double v) { return law.density(2.0, v); }, 2.0, law.y_max(), 1e-12))
              .epsilon(1e-8));
    // sample(u, .) with the top uniform inverts the y2 marginal
    for (double u : {0.1, 0.5, 0.9}) {
        const auto s = law.sample(u, 0.3);
        CHECK(s[0] < s[1]);
        CHECK(law.marginal_cdf(1, s[1]) / law.total_mass() == doctest::Approx(u).epsilon(1e-8));
    }
    const auto ent = kernels::entrance_chamber2(BesselParams::from_nu(1), DriftSpectrum::of({1, 4}), 1.0);
    CHECK(ent.density(1, 3) == doctest::Approx(0.0022969957915790551887).epsilon(1e-10));
}
