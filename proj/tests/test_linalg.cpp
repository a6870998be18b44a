#include "ncbesq/linalg.hpp"
#include "ncbesq/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace ncbesq;
using namespace ncbesq::linalg;

TEST_CASE("logdet of a small matrix") {
    Matrix m(3);
    const double v[] = {2, -1, 0, -1, 2, -1, 0, -1, 2};
    for (int k = 0; k < 9; ++k) m.a[k] = v[k];
    const LogDet d = logdet(m);
    CHECK(d.sign == 1);
    CHECK(d.value() == doctest::Approx(4.0).epsilon(1e-14));
    std::swap(m.a[0], m.a[3]);
    std::swap(m.a[1], m.a[4]);
    std::swap(m.a[2], m.a[5]);
    CHECK(logdet(m).value() == doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("singular matrices report sign 0") {
    Matrix m(2);
    m(0, 0) = 1;
    m(0, 1) = 2;
    m(1, 0) = 2;
    m(1, 1) = 4;
    CHECK(logdet(m).sign == 0);
    CHECK(logdet(m).value() == 0.0);
}

TEST_CASE("scaled logdet survives extreme magnitudes") {
    Matrix l(2);
    l(0, 0) = 1000;
    l(0, 1) = 1001;
    l(1, 0) = -800;
    l(1, 1) = -798;
    // det = e^{200}(e^2 - e) in log form
    const LogDet d = logdet_scaled(l);
    CHECK(d.sign == 1);
    CHECK(d.log_abs == doctest::Approx(200.0 + std::log(std::exp(2.0) - std::exp(1.0))).epsilon(1e-14));
    CHECK(logdet_scaled(l, {1, -1, 1, 1}).sign == 1);
}

TEST_CASE("LU solve") {
    Matrix m(3);
    const double v[] = {4, 1, 0, 1, 3, 1, 0, 1, 2};
    for (int k = 0; k < 9; ++k) m.a[k] = v[k];
    const auto x = LU(m).solve({1, 2, 3});
    for (int i = 0; i < 3; ++i) {
        double s = 0;
        for (int j = 0; j < 3; ++j) s += m(i, j) * x[j];
        CHECK(s == doctest::Approx(i + 1.0).epsilon(1e-14));
    }
}

TEST_CASE("vandermonde") {
    const LogDet d = log_vandermonde({1.0, 2.0, 4.0});
    CHECK(d.value() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(log_vandermonde({2.0, 1.0}).sign == -1);
    CHECK(log_vandermonde({1.0, 1.0}).sign == 0);
}

TEST_CASE("hermitian eigen reconstructs the matrix") {
    Stream s(7, 0);
    for (std::size_t n : {1u, 2u, 5u, 8u}) {
        CMatrix g(n, n);
        for (auto& z : g.a) z = cplx(s.normal(), s.normal());
        const CMatrix h = g + adjoint(g);
        const auto e = hermitian_eigen(h);
        for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k] >= e.values[k - 1]);
        CMatrix d(n, n);
        for (std::size_t k = 0; k < n; ++k) d(k, k) = e.values[k];
        const CMatrix r = e.vectors * d * adjoint(e.vectors);
        CMatrix diff = r + (-1.0) * h;
        CHECK(frobenius(diff) < 1e-10 * (1 + frobenius(h)));
        CMatrix o = adjoint(e.vectors) * e.vectors + (-1.0) * CMatrix::identity(n);
        CHECK(frobenius(o) < 1e-12);
    }
}
