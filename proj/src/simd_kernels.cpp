#include "ncbesq/simd_kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace ncbesq::simd {

namespace detail {

void euler_sqrt_step_scalar(double* x, const double* drift, const double* xi, std::size_t n, double dt, double sqdt) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xp = x[i] > 0.0 ? x[i] : 0.0;
        const double noise = ((2.0 * std::sqrt(xp)) * sqdt) * xi[i];
        const double y = (x[i] + drift[i] * dt) + noise;
        x[i] = y > 0.0 ? y : 0.0;
    }
}

void project_interval_scalar(double* x, const double* lo, const double* hi, double* push_up, double* push_down,
                             std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] < lo[i]) {
            push_up[i] += lo[i] - x[i];
            x[i] = lo[i];
        }
        if (x[i] > hi[i]) {
            push_down[i] += x[i] - hi[i];
            x[i] = hi[i];
        }
    }
}

void reflect_interval_scalar(double* x, const double* lo, const double* hi, double* push_up, double* push_down,
                             std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        if (v < lo[i]) {
            const double d = lo[i] - v;
            v = lo[i] + d;
            push_up[i] += 2.0 * d;
        }
        if (v > hi[i]) {
            const double d = v - hi[i];
            v = hi[i] - d;
            push_down[i] += 2.0 * d;
        }
        if (v < lo[i]) {
            push_up[i] += lo[i] - v;
            v = lo[i];
        }
        x[i] = v;
    }
}

#ifndef NCBESQ_WITH_AVX2
void euler_sqrt_step_avx2(double*, const double*, const double*, std::size_t, double, double) {
    throw std::runtime_error("AVX2 kernels not compiled in");
}
void project_interval_avx2(double*, const double*, const double*, double*, double*, std::size_t) {
    throw std::runtime_error("AVX2 kernels not compiled in");
}
void reflect_interval_avx2(double*, const double*, const double*, double*, double*, std::size_t) {
    throw std::runtime_error("AVX2 kernels not compiled in");
}
#endif

}  // namespace detail

namespace {

bool detect_avx2() {
#if defined(NCBESQ_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect_avx2() ? Isa::Avx2 : Isa::Scalar};
    return isa;
}

}  // namespace

bool avx2_available() { return detect_avx2(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (isa == Isa::Avx2 && !detect_avx2()) throw std::runtime_error("force_isa: AVX2 not available");
    current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void euler_sqrt_step(double* x, const double* drift, const double* xi, std::size_t n, double dt, double sqdt) {
    if (active_isa() == Isa::Avx2) detail::euler_sqrt_step_avx2(x, drift, xi, n, dt, sqdt);
    else detail::euler_sqrt_step_scalar(x, drift, xi, n, dt, sqdt);
}

void project_interval(double* x, const double* lo, const double* hi, double* push_up, double* push_down, std::size_t n) {
    if (active_isa() == Isa::Avx2) detail::project_interval_avx2(x, lo, hi, push_up, push_down, n);
    else detail::project_interval_scalar(x, lo, hi, push_up, push_down, n);
}

}  // namespace ncbesq::simd

namespace ncbesq::simd {

void reflect_interval(double* x, const double* lo, const double* hi, double* push_up, double* push_down, std::size_t n) {
    if (active_isa() == Isa::Avx2) detail::reflect_interval_avx2(x, lo, hi, push_up, push_down, n);
    else detail::reflect_interval_scalar(x, lo, hi, push_up, push_down, n);
}

}  // namespace ncbesq::simd
