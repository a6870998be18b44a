#include "ncbesq/simd_kernels.hpp"

#include <immintrin.h>

namespace ncbesq::simd::detail {

void euler_sqrt_step_avx2(double* x, const double* drift, const double* xi, std::size_t n, double dt, double sqdt) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d vdt = _mm256_set1_pd(dt);
    const __m256d vsq = _mm256_set1_pd(sqdt);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        // max(a, b) returns b unless a > b, matching the scalar select
        const __m256d xp = _mm256_max_pd(vx, zero);
        __m256d noise = _mm256_mul_pd(two, _mm256_sqrt_pd(xp));
        noise = _mm256_mul_pd(noise, vsq);
        noise = _mm256_mul_pd(noise, _mm256_loadu_pd(xi + i));
        __m256d y = _mm256_add_pd(vx, _mm256_mul_pd(_mm256_loadu_pd(drift + i), vdt));
        y = _mm256_add_pd(y, noise);
        _mm256_storeu_pd(x + i, _mm256_max_pd(y, zero));
    }
    euler_sqrt_step_scalar(x + i, drift + i, xi + i, n - i, dt, sqdt);
}

void project_interval_avx2(double* x, const double* lo, const double* hi, double* push_up, double* push_down,
                           std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vlo = _mm256_loadu_pd(lo + i);
        const __m256d vhi = _mm256_loadu_pd(hi + i);
        const __m256d below = _mm256_cmp_pd(vx, vlo, _CMP_LT_OQ);
        const __m256d up = _mm256_and_pd(below, _mm256_sub_pd(vlo, vx));
        _mm256_storeu_pd(push_up + i, _mm256_add_pd(_mm256_loadu_pd(push_up + i), up));
        vx = _mm256_blendv_pd(vx, vlo, below);
        const __m256d above = _mm256_cmp_pd(vx, vhi, _CMP_GT_OQ);
        const __m256d down = _mm256_and_pd(above, _mm256_sub_pd(vx, vhi));
        _mm256_storeu_pd(push_down + i, _mm256_add_pd(_mm256_loadu_pd(push_down + i), down));
        _mm256_storeu_pd(x + i, _mm256_blendv_pd(vx, vhi, above));
    }
    project_interval_scalar(x + i, lo + i, hi + i, push_up + i, push_down + i, n - i);
}

void reflect_interval_avx2(double* x, const double* lo, const double* hi, double* push_up, double* push_down,
                           std::size_t n) {
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        const __m256d vlo = _mm256_loadu_pd(lo + i);
        const __m256d vhi = _mm256_loadu_pd(hi + i);
        __m256d up = _mm256_loadu_pd(push_up + i);
        __m256d down = _mm256_loadu_pd(push_down + i);

        __m256d m = _mm256_cmp_pd(v, vlo, _CMP_LT_OQ);
        __m256d d = _mm256_sub_pd(vlo, v);
        v = _mm256_blendv_pd(v, _mm256_add_pd(vlo, d), m);
        up = _mm256_blendv_pd(up, _mm256_add_pd(up, _mm256_mul_pd(two, d)), m);

        m = _mm256_cmp_pd(v, vhi, _CMP_GT_OQ);
        d = _mm256_sub_pd(v, vhi);
        v = _mm256_blendv_pd(v, _mm256_sub_pd(vhi, d), m);
        down = _mm256_blendv_pd(down, _mm256_add_pd(down, _mm256_mul_pd(two, d)), m);

        m = _mm256_cmp_pd(v, vlo, _CMP_LT_OQ);
        up = _mm256_blendv_pd(up, _mm256_add_pd(up, _mm256_sub_pd(vlo, v)), m);
        v = _mm256_blendv_pd(v, vlo, m);

        _mm256_storeu_pd(x + i, v);
        _mm256_storeu_pd(push_up + i, up);
        _mm256_storeu_pd(push_down + i, down);
    }
    reflect_interval_scalar(x + i, lo + i, hi + i, push_up + i, push_down + i, n - i);
}

}  // namespace ncbesq::simd::detail
