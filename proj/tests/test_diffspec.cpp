#include "ncbesq/diffspec.hpp"
#include "ncbesq/specfun.hpp"

#include <doctest.h>

#include <cmath>

using namespace ncbesq;

TEST_CASE("parameterizations") {
    CHECK(BesselParams::from_delta(3.0).nu == doctest::Approx(0.5));
    CHECK(BesselParams::from_nu(1.0).delta == doctest::Approx(4.0));
    CHECK_THROWS(BesselParams::from_nu(-1.0).validate());
}

TEST_CASE("BESQ eigenfunctions solve the generator equation") {
    for (double nu : {0.0, 0.5, 2.0}) {
        const auto spec = besq_spec(BesselParams::from_nu(nu));
        for (double lam : {0.2, 1.5})
            for (double x : {0.5, 2.0, 9.0}) {
                const double h = 1e-3 * x;
                const double f0 = spec.psi(lam, x), fp = spec.psi(lam, x + h), fm = spec.psi(lam, x - h);
                const double d2 = (fp - 2 * f0 + fm) / (h * h), d1 = (fp - fm) / (2 * h);
                CHECK(spec.a(x) * d2 + spec.b(x) * d1 == doctest::Approx(lam * f0).epsilon(1e-5));
            }
    }
}

TEST_CASE("speed and scale densities") {
    const auto spec = besq_spec(BesselParams::from_nu(1.0));
    // s'(x) = exp(-int b / a) and m = 1 / (a s')
    for (double x : {0.3, 1.0, 4.0}) {
        const double h = 1e-5;
        const double dlogs = (std::log(spec.scale_density(x + h)) - std::log(spec.scale_density(x - h))) / (2 * h);
        CHECK(dlogs == doctest::Approx(-spec.b(x) / spec.a(x)).epsilon(1e-7));
        CHECK(spec.speed_density(x) * spec.a(x) * spec.scale_density(x) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(spec.scale_density(spec.ref_point) == doctest::Approx(1.0));
}

TEST_CASE("Doob transform and dual") {
    const auto spec = besq_spec(BesselParams::from_nu(0.5));
    const auto doob = doob_of(spec, 0.7);
    const auto dual = dual_of(doob);
    CHECK_FALSE(dual.has_eigenfunctions());
    for (double x : {0.5, 3.0}) {
        CHECK(doob.b(x) == doctest::Approx(besq_lambda_drift(0.5, 0.7, x)).epsilon(1e-12));
        CHECK(dual.b(x) == doctest::Approx(besq_dual_drift(0.5, 0.7, x)).epsilon(1e-12));
        CHECK(dual.b(x) == doctest::Approx(doob.a_prime(x) - doob.b(x)).epsilon(1e-12));
    }
}

TEST_CASE("drift formulas") {
    const double z = std::sqrt(2 * 0.5 * 3.0);
    CHECK(besq_lambda_drift(1.0, 0.5, 3.0) ==
          doctest::Approx(2 * 2.0 + 2 * z * specfun::bessel_ratio(1.0, z)).epsilon(1e-14));
    CHECK(besq_lambda_drift(1.0, 0.0, 3.0) == doctest::Approx(4.0));
    CHECK(besq_dual_drift(1.0, 0.0, 3.0) == doctest::Approx(-2.0));
}
