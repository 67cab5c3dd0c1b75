// AVX2/FMA translation unit; compiled with -mavx2 -mfma -ffp-contract=off.
// The convolution and elementwise kernels keep the exact per-element
// operation order of the scalar reference (multiply then add, no FMA), so
// both backends produce bit-identical planes.

#include "greenforge/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace greenforge::kernels {

const KernelTable* avx2_table_or_null();

namespace {

inline int clamp_index(int i, int hi) {
    return i < 0 ? 0 : (i > hi ? hi : i);
}

inline float conv_one_h(const float* row, int width, int x,
                        const float* taps, int radius) {
    const int ntaps = 2 * radius + 1;
    float acc = 0.0f;
    for (int t = 0; t < ntaps; ++t) {
        acc += taps[t] * row[clamp_index(x - radius + t, width - 1)];
    }
    return acc;
}

void conv_h_avx2(const float* src, int width, int height,
                 const float* taps, int radius, float* dst) {
    const int ntaps = 2 * radius + 1;
    const int interior_begin = radius;
    const int interior_end = width - radius; // exclusive; all taps in bounds
    for (int y = 0; y < height; ++y) {
        const float* row = src + std::size_t(y) * width;
        float* out = dst + std::size_t(y) * width;
        int x = 0;
        for (; x < interior_begin && x < width; ++x) {
            out[x] = conv_one_h(row, width, x, taps, radius);
        }
        for (; x + 8 <= interior_end; x += 8) {
            __m256 acc = _mm256_setzero_ps();
            for (int t = 0; t < ntaps; ++t) {
                const __m256 k = _mm256_set1_ps(taps[t]);
                const __m256 v = _mm256_loadu_ps(row + x - radius + t);
                acc = _mm256_add_ps(acc, _mm256_mul_ps(k, v));
            }
            _mm256_storeu_ps(out + x, acc);
        }
        for (; x < width; ++x) {
            out[x] = conv_one_h(row, width, x, taps, radius);
        }
    }
}

void conv_v_avx2(const float* src, int width, int height,
                 const float* taps, int radius, float* dst) {
    const int ntaps = 2 * radius + 1;
    for (int y = 0; y < height; ++y) {
        float* out = dst + std::size_t(y) * width;
        int x = 0;
        for (; x + 8 <= width; x += 8) {
            __m256 acc = _mm256_setzero_ps();
            for (int t = 0; t < ntaps; ++t) {
                const int yy = clamp_index(y - radius + t, height - 1);
                const __m256 k = _mm256_set1_ps(taps[t]);
                const __m256 v = _mm256_loadu_ps(src + std::size_t(yy) * width + x);
                acc = _mm256_add_ps(acc, _mm256_mul_ps(k, v));
            }
            _mm256_storeu_ps(out + x, acc);
        }
        for (; x < width; ++x) {
            float acc = 0.0f;
            for (int t = 0; t < ntaps; ++t) {
                const int yy = clamp_index(y - radius + t, height - 1);
                acc += taps[t] * src[std::size_t(yy) * width + x];
            }
            out[x] = acc;
        }
    }
}

void add_clamp01_avx2(const float* base, const float* delta, std::size_t n, float* dst) {
    const __m256 zero = _mm256_setzero_ps();
    const __m256 one = _mm256_set1_ps(1.0f);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 v = _mm256_add_ps(_mm256_loadu_ps(base + i), _mm256_loadu_ps(delta + i));
        v = _mm256_min_ps(one, _mm256_max_ps(zero, v));
        _mm256_storeu_ps(dst + i, v);
    }
    for (; i < n; ++i) {
        float v = base[i] + delta[i];
        v = v < 0.0f ? 0.0f : v;
        dst[i] = v > 1.0f ? 1.0f : v;
    }
}

void mul_avx2(const float* a, const float* b, std::size_t n, float* dst) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(dst + i, _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
    }
    for (; i < n; ++i) {
        dst[i] = a[i] * b[i];
    }
}

inline double hsum4(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double sum_abs_diff_avx2(const float* a, const float* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 fa = _mm256_loadu_ps(a + i);
        const __m256 fb = _mm256_loadu_ps(b + i);
        const __m256d dlo = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(fa)),
                                          _mm256_cvtps_pd(_mm256_castps256_ps128(fb)));
        const __m256d dhi = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(fa, 1)),
                                          _mm256_cvtps_pd(_mm256_extractf128_ps(fb, 1)));
        acc0 = _mm256_add_pd(acc0, abs_pd(dlo));
        acc1 = _mm256_add_pd(acc1, abs_pd(dhi));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        tail += std::fabs(double(a[i]) - double(b[i]));
    }
    return hsum4(_mm256_add_pd(acc0, acc1)) + tail;
}

double sum_abs_diff_weighted_avx2(const float* a, const float* b,
                                  const double* w, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 fa = _mm256_loadu_ps(a + i);
        const __m256 fb = _mm256_loadu_ps(b + i);
        const __m256d dlo = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(fa)),
                                          _mm256_cvtps_pd(_mm256_castps256_ps128(fb)));
        const __m256d dhi = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(fa, 1)),
                                          _mm256_cvtps_pd(_mm256_extractf128_ps(fb, 1)));
        const __m256d wlo = _mm256_loadu_pd(w + i);
        const __m256d whi = _mm256_loadu_pd(w + i + 4);
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(wlo, abs_pd(dlo)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(whi, abs_pd(dhi)));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        tail += w[i] * std::fabs(double(a[i]) - double(b[i]));
    }
    return hsum4(_mm256_add_pd(acc0, acc1)) + tail;
}

double sum_sq_diff_avx2(const float* a, const float* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 fa = _mm256_loadu_ps(a + i);
        const __m256 fb = _mm256_loadu_ps(b + i);
        const __m256d dlo = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(fa)),
                                          _mm256_cvtps_pd(_mm256_castps256_ps128(fb)));
        const __m256d dhi = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(fa, 1)),
                                          _mm256_cvtps_pd(_mm256_extractf128_ps(fb, 1)));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(dlo, dlo));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(dhi, dhi));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = double(a[i]) - double(b[i]);
        tail += d * d;
    }
    return hsum4(_mm256_add_pd(acc0, acc1)) + tail;
}

} // namespace

const KernelTable* avx2_table_or_null() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) {
        return nullptr;
    }
    static const KernelTable table{
        "avx2",
        conv_h_avx2,
        conv_v_avx2,
        add_clamp01_avx2,
        mul_avx2,
        sum_abs_diff_avx2,
        sum_abs_diff_weighted_avx2,
        sum_sq_diff_avx2,
    };
    return &table;
}

} // namespace greenforge::kernels
