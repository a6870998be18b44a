#include "ncbesq/gibbs.hpp"
#include "ncbesq/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace ncbesq;
using gibbs::LevelPair;

namespace {

double exp_top(const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v;
    return std::exp(-s);
}

}  // namespace

TEST_CASE("kernel densities integrate to one for n = 1") {
    const auto b = gibbs::PsiBundle::besq(BesselParams::from_nu(0.5), DriftSpectrum::of({1.0, 4.0}));
    for (double y : {0.3, 2.0, 7.0}) {
        const double m = quad::integral([&](double x) { return b.lambda_kernel_density(LevelPair::Even, {y}, {x}); }, 0.0, y);
        CHECK(m == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (auto y : std::vector<std::vector<double>>{{0.5, 1.0}, {1.0, 6.0}}) {
        const double m =
            quad::integral([&](double x) { return b.lambda_kernel_density(LevelPair::Odd, y, {x}); }, y[0], y[1]);
        CHECK(m == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(b.lambda_kernel_density(LevelPair::Even, {1.0}, {1.5}) == 0.0);
    CHECK(b.lambda_kernel_density(LevelPair::Odd, {1.0, 2.0}, {0.5}) == 0.0);
}

TEST_CASE("kernel densities integrate to one for n = 2") {
    const auto b = gibbs::PsiBundle::besq(BesselParams::from_nu(1.0), DriftSpectrum::of({0.5, 2.0, 3.5}));
    const std::vector<double> y{1.0, 3.0};
    const double m = quad::integral(
        [&](double x1) {
            return quad::integral([&](double x2) { return b.lambda_kernel_density(LevelPair::Even, y, {x1, x2}); }, y[0],
                                  y[1], 1e-10);
        },
        0.0, y[0], 1e-10);
    CHECK(m == doctest::Approx(1.0).epsilon(1e-8));
    const std::vector<double> y3{0.5, 2.0, 4.0};
    const double m3 = quad::integral(
        [&](double x1) {
            return quad::integral([&](double x2) { return b.lambda_kernel_density(LevelPair::Odd, y3, {x1, x2}); }, y3[1],
                                  y3[2], 1e-10);
        },
        y3[0], y3[1], 1e-10);
    CHECK(m3 == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("closed-form entry antiderivative matches quadrature") {
    const auto b = gibbs::PsiBundle::besq(BesselParams::from_nu(1.0), DriftSpectrum::of({0.5, 2.0, 3.5}));
    const auto& spec = b.spec();
    for (std::size_t n : {1u, 2u})
        for (std::size_t i = 1; i <= n; ++i)
            for (double y : {0.2, 1.0, 5.0}) {
                const double lj = b.lambdas()[n], li = b.lambdas()[i - 1];
                const double c = spec.ref_point;
                const double q = quad::integral(
                    [&](double v) {
                        return spec.psi(li, v) * spec.psi(lj, v) / (spec.psi(lj, c) * spec.psi(lj, c)) * spec.speed_density(v);
                    },
                    0.0, y, 1e-13);
                CHECK(b.even_entry_antiderivative(i, n, y) == doctest::Approx(q).epsilon(1e-10));
            }
}

TEST_CASE("property: Gibbs samples interlace and are reproducible") {
    const auto b = gibbs::PsiBundle::besq(BesselParams::from_nu(0.0), DriftSpectrum::of({0.4, 1.0, 2.0, 5.0}));
    for (int t = 0; t < 50; ++t) {
        Stream s1(3, t), s2(3, t);
        const auto a = gibbs::sample_gibbs(b, {0.5, 1.0, 2.0, 6.0}, s1);
        CHECK(a.levels() == 7);
        CHECK(a.valid(true));
        CHECK(a.flatten() == gibbs::sample_gibbs(b, {0.5, 1.0, 2.0, 6.0}, s2).flatten());
    }
}

TEST_CASE("property: explicit and telescoped densities agree") {
    const auto b = gibbs::PsiBundle::besq(BesselParams::from_nu(1.5), DriftSpectrum::of({0.5, 2.0, 3.5}));
    for (int t = 0; t < 30; ++t) {
        Stream s(4, t);
        const auto a = gibbs::sample_gibbs(b, {0.3 + t * 0.05, 2.0, 4.0 + t * 0.1}, s);
        const double d1 = gibbs::gibbs_density(b, a, exp_top);
        const double d2 = gibbs::gibbs_density_telescoped(b, a, exp_top);
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-10));
    }
}

TEST_CASE("gibbs density outside the support") {
    const auto b = gibbs::PsiBundle::besq(BesselParams::from_nu(0.0), DriftSpectrum::of({1.0, 4.0}));
    HalfArray bad;
    bad.rows = {{3.0}, {2.0}, {1.0, 4.0}};
    CHECK(gibbs::gibbs_density(b, bad, exp_top) == 0.0);
}

TEST_CASE("property: sample marginal of level 1 given a one-point level 2") {
    // For N = 2, P(x^{(1)} <= u | x^{(2)} = y) equals the normalized antiderivative.
    const auto b = gibbs::PsiBundle::besq(BesselParams::from_nu(0.0), DriftSpectrum::of({1.0, 4.0}));
    const double y = 2.0;
    int below = 0;
    const int n = 4000;
    for (int t = 0; t < n; ++t) {
        Stream s(5, t);
        if (b.sample_level(LevelPair::Even, {y}, s)[0] < 1.0) ++below;
    }
    const double p = b.even_entry_antiderivative(1, 1, 1.0) / b.even_entry_antiderivative(1, 1, y);
    CHECK(double(below) / n == doctest::Approx(p).epsilon(0.05));
}

TEST_CASE("degenerate kernels integrate to one") {
    const gibbs::DegenerateKernels d(BesselParams::from_nu(1.0), 3);
    for (double y : {0.5, 3.0}) {
        const double m = quad::integral([&](double x) { return d.lambda_kernel_density(LevelPair::Even, {y}, {x}); }, 0.0, y);
        CHECK(m == doctest::Approx(1.0).epsilon(1e-9));
    }
    const std::vector<double> y{1.0, 2.5};
    const double m = quad::integral([&](double x) { return d.lambda_kernel_density(LevelPair::Odd, y, {x}); }, y[0], y[1]);
    CHECK(m == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("degenerate kernels are the small-drift limit") {
    const auto p = BesselParams::from_nu(1.0);
    const gibbs::DegenerateKernels d(p, 2);
    const auto b = gibbs::PsiBundle::besq(p, DriftSpectrum::of({1e-5, 2e-5}));
    CHECK(b.lambda_kernel_density(LevelPair::Even, {2.0}, {0.7}) ==
          doctest::Approx(d.lambda_kernel_density(LevelPair::Even, {2.0}, {0.7})).epsilon(1e-4));
    CHECK(b.lambda_kernel_density(LevelPair::Odd, {0.5, 2.0}, {1.2}) ==
          doctest::Approx(d.lambda_kernel_density(LevelPair::Odd, {0.5, 2.0}, {1.2})).epsilon(1e-4));
}
