#include "ncbesq/rng.hpp"
#include "ncbesq/simd_kernels.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using namespace ncbesq;

namespace {

struct Inputs {
    std::vector<double> x, drift, xi, lo, hi;
};

Inputs make(std::size_t n, std::uint64_t seed) {
    Stream s(seed, 0);
    Inputs in;
    for (std::size_t i = 0; i < n; ++i) {
        const double l = 3.0 * s.uniform();
        in.lo.push_back(l);
        in.hi.push_back(i % 7 == 0 ? l + 1e-9 : l + 2.0 * s.uniform());
        in.x.push_back(i % 5 == 0 ? -0.5 * s.uniform() : 6.0 * s.uniform() - 1.0);
        in.drift.push_back(4.0 * s.normal());
        in.xi.push_back(s.normal());
    }
    return in;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar Euler step follows the truncated scheme") {
    std::vector<double> x{1.0, -0.2, 0.0}, drift{2.0, 2.0, -1.0}, xi{0.5, 1.0, 0.3};
    simd::detail::euler_sqrt_step_scalar(x.data(), drift.data(), xi.data(), 3, 0.01, 0.1);
    CHECK(x[0] == doctest::Approx(1.0 + 0.02 + 2.0 * 0.1 * 0.5));
    CHECK(x[1] == 0.0);
    CHECK(x[2] == 0.0);
}

TEST_CASE("scalar reflection and projection") {
    std::vector<double> x{-0.5, 2.5, 1.5, 0.5}, lo{0, 0, 0, 0.45}, hi{1, 2, 2, 0.55};
    std::vector<double> up(4, 0.0), down(4, 0.0);
    auto y = x;
    simd::detail::project_interval_scalar(y.data(), lo.data(), hi.data(), up.data(), down.data(), 4);
    CHECK(y == std::vector<double>{0, 2, 1.5, 0.5});
    CHECK(up[0] == 0.5);
    CHECK(down[1] == 0.5);
    y = x;
    std::fill(up.begin(), up.end(), 0.0);
    std::fill(down.begin(), down.end(), 0.0);
    simd::detail::reflect_interval_scalar(y.data(), lo.data(), hi.data(), up.data(), down.data(), 4);
    CHECK(y[0] == 0.5);
    CHECK(up[0] == 1.0);
    CHECK(y[1] == 1.5);
    CHECK(down[1] == 1.0);
    CHECK(y[2] == 1.5);
    CHECK(y[3] == 0.5);
    for (std::size_t i = 0; i < 4; ++i) CHECK((y[i] >= lo[i] && y[i] <= hi[i]));
}

TEST_CASE("reflection into a cell narrower than the overshoot clamps") {
    std::vector<double> x{-3.0}, lo{0.0}, hi{1.0}, up{0.0}, down{0.0};
    simd::detail::reflect_interval_scalar(x.data(), lo.data(), hi.data(), up.data(), down.data(), 1);
    CHECK(x[0] >= 0.0);
    CHECK(x[0] <= 1.0);
    CHECK(x[0] + down[0] - up[0] == doctest::Approx(-3.0));
}

TEST_CASE("AVX2 kernels are bitwise identical to scalar") {
    if (!simd::avx2_available()) {
        MESSAGE("AVX2 not available; skipping");
        CHECK_THROWS(simd::force_isa(simd::Isa::Avx2));
        return;
    }
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
        const Inputs in = make(n, 100 + n);
        auto a = in.x, b = in.x;
        simd::detail::euler_sqrt_step_scalar(a.data(), in.drift.data(), in.xi.data(), n, 1e-3, std::sqrt(1e-3));
        simd::detail::euler_sqrt_step_avx2(b.data(), in.drift.data(), in.xi.data(), n, 1e-3, std::sqrt(1e-3));
        CHECK(same_bits(a, b));

        for (int which = 0; which < 2; ++which) {
            auto xa = in.x, xb = in.x;
            std::vector<double> ua(n, 0.1), da(n, 0.2), ub(n, 0.1), db(n, 0.2);
            if (which == 0) {
                simd::detail::project_interval_scalar(xa.data(), in.lo.data(), in.hi.data(), ua.data(), da.data(), n);
                simd::detail::project_interval_avx2(xb.data(), in.lo.data(), in.hi.data(), ub.data(), db.data(), n);
            } else {
                simd::detail::reflect_interval_scalar(xa.data(), in.lo.data(), in.hi.data(), ua.data(), da.data(), n);
                simd::detail::reflect_interval_avx2(xb.data(), in.lo.data(), in.hi.data(), ub.data(), db.data(), n);
            }
            CHECK(same_bits(xa, xb));
            CHECK(same_bits(ua, ub));
            CHECK(same_bits(da, db));
        }
    }
}

TEST_CASE("dispatch can be forced") {
    const auto before = simd::active_isa();
    simd::force_isa(simd::Isa::Scalar);
    CHECK(simd::active_isa() == simd::Isa::Scalar);
    CHECK(std::string(simd::isa_name(simd::Isa::Scalar)) == "scalar");
    simd::force_isa(before);
}
