#include "greenforge/kernels.hpp"

#include <cmath>

namespace greenforge::kernels {
namespace {

inline int clamp_index(int i, int hi) {
    return i < 0 ? 0 : (i > hi ? hi : i);
}

void conv_h_scalar(const float* src, int width, int height,
                   const float* taps, int radius, float* dst) {
    const int ntaps = 2 * radius + 1;
    for (int y = 0; y < height; ++y) {
        const float* row = src + std::size_t(y) * width;
        float* out = dst + std::size_t(y) * width;
        for (int x = 0; x < width; ++x) {
            float acc = 0.0f;
            for (int t = 0; t < ntaps; ++t) {
                acc += taps[t] * row[clamp_index(x - radius + t, width - 1)];
            }
            out[x] = acc;
        }
    }
}

void conv_v_scalar(const float* src, int width, int height,
                   const float* taps, int radius, float* dst) {
    const int ntaps = 2 * radius + 1;
    for (int y = 0; y < height; ++y) {
        float* out = dst + std::size_t(y) * width;
        for (int x = 0; x < width; ++x) {
            float acc = 0.0f;
            for (int t = 0; t < ntaps; ++t) {
                const int yy = clamp_index(y - radius + t, height - 1);
                acc += taps[t] * src[std::size_t(yy) * width + x];
            }
            out[x] = acc;
        }
    }
}

void add_clamp01_scalar(const float* base, const float* delta, std::size_t n, float* dst) {
    for (std::size_t i = 0; i < n; ++i) {
        float v = base[i] + delta[i];
        v = v < 0.0f ? 0.0f : v;
        dst[i] = v > 1.0f ? 1.0f : v;
    }
}

void mul_scalar(const float* a, const float* b, std::size_t n, float* dst) {
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = a[i] * b[i];
    }
}

double sum_abs_diff_scalar(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::fabs(double(a[i]) - double(b[i]));
    }
    return acc;
}

double sum_abs_diff_weighted_scalar(const float* a, const float* b,
                                    const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += w[i] * std::fabs(double(a[i]) - double(b[i]));
    }
    return acc;
}

double sum_sq_diff_scalar(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = double(a[i]) - double(b[i]);
        acc += d * d;
    }
    return acc;
}

} // namespace

const KernelTable& scalar() {
    static const KernelTable table{
        "scalar",
        conv_h_scalar,
        conv_v_scalar,
        add_clamp01_scalar,
        mul_scalar,
        sum_abs_diff_scalar,
        sum_abs_diff_weighted_scalar,
        sum_sq_diff_scalar,
    };
    return table;
}

} // namespace greenforge::kernels
