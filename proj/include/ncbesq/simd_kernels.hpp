#pragma once

#include <cstddef>

namespace ncbesq::simd {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
Isa active_isa();
// Select an implementation; requesting Avx2 on a machine without it throws.
void force_isa(Isa isa);
const char* isa_name(Isa isa);

// Full-truncation Euler step for dx = drift dt + 2 sqrt(x) dW:
// x[i] = max(x[i] + drift[i] * dt + 2 sqrt(max(x[i], 0)) * sqdt * xi[i], 0).
// All implementations round identically.
void euler_sqrt_step(double* x, const double* drift, const double* xi, std::size_t n, double dt, double sqdt);

// Clamp x[i] into [lo[i], hi[i]] and add the displacement to push_up / push_down.
void project_interval(double* x, const double* lo, const double* hi, double* push_up, double* push_down, std::size_t n);

// Mirror x[i] back into [lo[i], hi[i]] across the barrier it crossed, clamping if the cell is
// narrower than the overshoot; the displacement is added to push_up / push_down.
void reflect_interval(double* x, const double* lo, const double* hi, double* push_up, double* push_down, std::size_t n);

namespace detail {
void euler_sqrt_step_scalar(double* x, const double* drift, const double* xi, std::size_t n, double dt, double sqdt);
void project_interval_scalar(double* x, const double* lo, const double* hi, double* push_up, double* push_down,
                             std::size_t n);
void euler_sqrt_step_avx2(double* x, const double* drift, const double* xi, std::size_t n, double dt, double sqdt);
void project_interval_avx2(double* x, const double* lo, const double* hi, double* push_up, double* push_down,
                           std::size_t n);
void reflect_interval_scalar(double* x, const double* lo, const double* hi, double* push_up, double* push_down,
                             std::size_t n);
void reflect_interval_avx2(double* x, const double* lo, const double* hi, double* push_up, double* push_down,
                           std::size_t n);
}  // namespace detail

}  // namespace ncbesq::simd
