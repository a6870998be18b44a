#include "ncbesq/rng.hpp"
#include "ncbesq/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ncbesq;

// Kolmogorov tail and KS statistics checked against scipy; Wilson interval against statsmodels.
TEST_CASE("kolmogorov tail") {
    CHECK(stats::kolmogorov_tail(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-12));
    CHECK(stats::kolmogorov_tail(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-12));
    CHECK(stats::kolmogorov_tail(1.36) == doctest::Approx(0.049485876755377876).epsilon(1e-12));
    CHECK(stats::kolmogorov_tail(2.0) == doctest::Approx(0.0006709252557796953).epsilon(1e-10));
    CHECK(stats::kolmogorov_tail(0.0) == 1.0);
}

TEST_CASE("KS statistics") {
    CHECK(stats::ks_two_sample({0.1, 0.4, 0.35, 0.8, 0.9, 1.2}, {0.2, 0.3, 0.5, 0.55, 1.0}).statistic ==
          doctest::Approx(0.3));
    CHECK(stats::ks_one_sample({0.1, 0.2, 0.45, 0.5, 0.9}, [](double x) { return std::clamp(x, 0.0, 1.0); }).statistic ==
          doctest::Approx(0.3));
}

TEST_CASE("KS p-values are roughly uniform under the null") {
    int rejections = 0;
    for (int r = 0; r < 200; ++r) {
        Stream s(3, r);
        std::vector<double> a(500), b(400);
        for (auto& v : a) v = s.normal();
        for (auto& v : b) v = s.normal();
        if (stats::ks_two_sample(a, b).p_value < 0.05) ++rejections;
    }
    CHECK(rejections >= 2);
    CHECK(rejections <= 22);
    Stream s(4, 0);
    std::vector<double> shifted(2000);
    for (auto& v : shifted) v = s.normal() + 0.2;
    CHECK(stats::ks_one_sample(shifted, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }).p_value < 1e-6);
}

TEST_CASE("tabulated CDF") {
    const stats::TabulatedCdf c([](double x) { return std::exp(-x); }, 0.0, 30.0, 200);
    CHECK(c(1.0) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(c(0.0) == 0.0);
    CHECK(c(50.0) == doctest::Approx(c.total_mass()));
}

TEST_CASE("wilson interval and mean") {
    const auto [lo, hi] = stats::wilson_interval(631, 1000);
    CHECK(lo == doctest::Approx(0.6006445504355559).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.6603528388412286).epsilon(1e-12));
    const auto m = stats::mean_with_error({1, 2, 3, 4});
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.std_err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("streams are reproducible and distinct") {
    Stream a(1, 2), b(1, 2), c(1, 3);
    for (int k = 0; k < 10; ++k) {
        const double x = a.normal();
        CHECK(x == b.normal());
        CHECK(x != c.normal());
    }
    CHECK(Stream(5, 0).split(1).key() != Stream(5, 0).split(2).key());
    Stream u(9, 0);
    for (int k = 0; k < 1000; ++k) {
        const double v = u.uniform();
        CHECK((v > 0.0 && v < 1.0));
    }
}
