#include "ncbesq/specfun.hpp"

#include <doctest.h>

#include <cmath>

using namespace ncbesq;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
}  // namespace

// Reference values from a 40-digit evaluation (mpmath).
TEST_CASE("besseli matches high-precision reference values") {
    struct Row {
        double nu, x, v;
    };
    const Row rows[] = {
        {0, 0.5, 1.0634833707413235193},        {0, 25.0, 5774560606.4663103158},
        {1, 3.0, 3.9533702174026093965},        {2.5, 0.01, 5.319268399960871803e-7},
        {7.25, 40.0, 7671082712415411.8396},    {0.5, 700.0, 1.5293200350315745008e+302},
        {3, 1e-5, 2.0833333333463546779e-17},
    };
    for (const auto& r : rows) {
        CAPTURE(r.nu);
        CAPTURE(r.x);
        CHECK(rel(specfun::besseli(r.nu, r.x), r.v) < 1e-13);
    }
    CHECK(rel(specfun::log_besseli(0, 2000.0), 1995.2806727526574305) < 1e-14);
    CHECK(rel(specfun::log_besseli(4.5, 1e4), 9994.4748912308189068) < 1e-14);
}

TEST_CASE("besseli edge cases") {
    CHECK(specfun::besseli(0, 0.0) == 1.0);
    CHECK(specfun::besseli(2, 0.0) == 0.0);
    CHECK(specfun::besseli(-3, 2.0) == doctest::Approx(specfun::besseli(3, 2.0)).epsilon(1e-15));
    CHECK_THROWS(specfun::besseli(-0.5, 1.0));
    CHECK_THROWS(specfun::besseli(1.0, -1.0));
    CHECK(std::isinf(specfun::log_besseli(1.0, 0.0)));
}

TEST_CASE("recurrence I_{nu-1} - I_{nu+1} = 2 nu / x I_nu") {
    for (double nu : {1.0, 1.5, 4.0, 10.25})
        for (double x : {0.1, 1.0, 9.0, 60.0}) {
            const double lhs = specfun::besseli(nu - 1, x) - specfun::besseli(nu + 1, x);
            CHECK(rel(lhs, 2 * nu / x * specfun::besseli(nu, x)) < 1e-12);
        }
}

TEST_CASE("scaled and log forms agree") {
    for (double nu : {0.0, 2.0, 5.5})
        for (double x : {0.3, 5.0, 80.0}) {
            CHECK(rel(specfun::besseli_scaled(nu, x), std::exp(-x) * specfun::besseli(nu, x)) < 1e-13);
            CHECK(specfun::log_besseli(nu, x) == doctest::Approx(std::log(specfun::besseli(nu, x))).epsilon(1e-14));
        }
}

TEST_CASE("phi values and limits") {
    CHECK(rel(specfun::phi(0, 0.5, 2.0), 1.5660829297563505373) < 1e-14);
    CHECK(rel(specfun::phi(1, 2.0, 3.0), 1.7343248093802665707) < 1e-14);
    CHECK(rel(specfun::phi(2.5, 0.1, 0.0), 0.053192304053524357059) < 1e-14);
    CHECK(rel(specfun::phi(1.0, 0.0, 4.0), specfun::phi(1.0, 0.3, 0.0)) < 1e-15);
}

TEST_CASE("phi_log_deriv matches a central difference") {
    for (double nu : {0.0, 1.0, 3.5})
        for (double lam : {0.1, 2.0})
            for (double x : {0.2, 3.0, 50.0}) {
                const double h = 1e-5 * x;
                const double fd = (specfun::log_phi(nu, lam, x + h) - specfun::log_phi(nu, lam, x - h)) / (2 * h);
                CHECK(rel(specfun::phi_log_deriv(nu, lam, x), fd) < 1e-7);
            }
}

// Cubic Hermite with h = 1/64 is accurate to a few 1e-10.
TEST_CASE("ratio table tracks the direct ratio") {
    for (double nu : {0.0, 0.5, 1.0, 3.0}) {
        const auto& tab = specfun::ratio_table(nu);
        double worst = 0.0;
        for (int k = 0; k <= 4000; ++k) {
            const double z = 0.01 * k + 1e-3;
            worst = std::max(worst, rel(tab(z), specfun::bessel_ratio(nu, z)));
        }
        CAPTURE(nu);
        CHECK(worst < 1e-9);
        CHECK(&specfun::ratio_table(nu) == &tab);
    }
}

TEST_CASE("ratio is increasing in z and bounded by 1") {
    double prev = 0.0;
    for (int k = 1; k < 300; ++k) {
        const double r = specfun::bessel_ratio(1.5, 0.5 * k);
        CHECK(r > prev);
        CHECK(r < 1.0);
        prev = r;
    }
}
