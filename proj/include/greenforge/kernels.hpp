#pragma once

#include <cstddef>

namespace greenforge::kernels {

/// Data-parallel inner loops shared by the blur, corruption, and scoring
/// paths. Each entry has a scalar reference implementation and, on x86-64
/// with AVX2+FMA, a vector variant selected at runtime.
///
/// conv_h/conv_v and the elementwise ops evaluate each output element with
/// the same operation order in every backend (no FMA contraction), so their
/// results are bit-identical between scalar and AVX2. The reductions
/// accumulate in double but combine lanes in a backend-specific order; they
/// agree to ~1e-12 relative, which the equivalence tests pin.
struct KernelTable {
    const char* name;

    /// Separable convolution pass over one plane, taps[-radius..radius]
    /// passed as taps[0..2*radius], borders handled by edge replication.
    void (*conv_h_replicate)(const float* src, int width, int height,
                             const float* taps, int radius, float* dst);
    void (*conv_v_replicate)(const float* src, int width, int height,
                             const float* taps, int radius, float* dst);

    /// dst[i] = clamp(base[i] + delta[i], 0, 1)
    void (*add_clamp01)(const float* base, const float* delta, std::size_t n, float* dst);

    /// dst[i] = a[i] * b[i]
    void (*mul)(const float* a, const float* b, std::size_t n, float* dst);

    /// sum_i |a[i] - b[i]|
    double (*sum_abs_diff)(const float* a, const float* b, std::size_t n);

    /// sum_i w[i] * |a[i] - b[i]|; weights carry full double precision so
    /// exact weight ratios survive into the loss.
    double (*sum_abs_diff_weighted)(const float* a, const float* b,
                                    const double* w, std::size_t n);

    /// sum_i (a[i] - b[i])^2
    double (*sum_sq_diff)(const float* a, const float* b, std::size_t n);
};

const KernelTable& scalar();

/// AVX2 table, or nullptr when the build target or the running CPU lacks
/// AVX2/FMA support.
const KernelTable* avx2();

/// The backend in use: AVX2 when available, else scalar. The environment
/// variable GREENFORGE_KERNELS=scalar|avx2 overrides the choice; requesting
/// an unavailable backend throws.
const KernelTable& active();

} // namespace greenforge::kernels
