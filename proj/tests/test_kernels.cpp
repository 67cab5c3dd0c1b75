#include <doctest.h>

#include <cmath>
#include <vector>

#include "greenforge/kernels.hpp"
#include "greenforge/rng.hpp"

using namespace greenforge;

namespace {

std::vector<float> random_buffer(SeededRng& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
    std::vector<float> v(n);
    for (auto& x : v) {
        x = float(rng.uniform(lo, hi));
    }
    return v;
}

std::vector<float> normalized_taps(SeededRng& rng, int radius) {
    std::vector<float> taps(std::size_t(2 * radius + 1));
    double sum = 0.0;
    for (auto& t : taps) {
        t = float(rng.uniform(0.0, 1.0));
        sum += t;
    }
    for (auto& t : taps) {
        t = float(t / sum);
    }
    return taps;
}

} // namespace

TEST_CASE("scalar elementwise kernels compute the documented ops") {
    const auto& k = kernels::scalar();
    const float base[5] = {0.0f, 0.5f, 0.9f, 1.0f, 0.25f};
    const float delta[5] = {-0.5f, 0.25f, 0.2f, 0.5f, -0.25f};
    float out[5];
    k.add_clamp01(base, delta, 5, out);
    CHECK(out[0] == 0.0f);  // clamped below
    CHECK(out[1] == 0.75f);
    CHECK(out[2] == 1.0f); // 1.1 clamped
    CHECK(out[3] == 1.0f);
    CHECK(out[4] == 0.0f);

    const float a[3] = {0.5f, 2.0f, -1.0f};
    const float b[3] = {4.0f, 0.25f, 3.0f};
    k.mul(a, b, 3, out);
    CHECK(out[0] == 2.0f);
    CHECK(out[1] == 0.5f);
    CHECK(out[2] == -3.0f);

    const float x[4] = {1.0f, 0.0f, 0.5f, 0.25f};
    const float y[4] = {0.0f, 1.0f, 0.25f, 0.25f};
    const double w[4] = {1.0, 0.5, 2.0, 10.0};
    CHECK(k.sum_abs_diff(x, y, 4) == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(k.sum_abs_diff_weighted(x, y, w, 4) == doctest::Approx(1.0 + 0.5 + 0.5).epsilon(1e-12));
    CHECK(k.sum_sq_diff(x, y, 4) == doctest::Approx(1.0 + 1.0 + 0.0625).epsilon(1e-12));
}

TEST_CASE("avx2 backend matches scalar") {
    const kernels::KernelTable* vec = kernels::avx2();
    if (vec == nullptr) {
        MESSAGE("AVX2 unavailable; equivalence covered by the scalar path only");
        return;
    }
    const auto& ref = kernels::scalar();
    SeededRng rng(2024);

    SUBCASE("convolution is bit-identical, including narrow planes and wide taps") {
        const int shapes[][2] = {{64, 33}, {7, 5}, {8, 8}, {129, 3}, {3, 40}, {1, 9}};
        for (const auto& shape : shapes) {
            const int w = shape[0];
            const int h = shape[1];
            for (int radius : {1, 4, 11, 48}) {
                const auto src = random_buffer(rng, std::size_t(w) * std::size_t(h));
                const auto taps = normalized_taps(rng, radius);
                std::vector<float> a(src.size()), b(src.size());
                ref.conv_h_replicate(src.data(), w, h, taps.data(), radius, a.data());
                vec->conv_h_replicate(src.data(), w, h, taps.data(), radius, b.data());
                CHECK(a == b);
                ref.conv_v_replicate(src.data(), w, h, taps.data(), radius, a.data());
                vec->conv_v_replicate(src.data(), w, h, taps.data(), radius, b.data());
                CHECK(a == b);
            }
        }
    }

    SUBCASE("elementwise ops are bit-identical across lane boundaries") {
        for (std::size_t n : {1u, 7u, 8u, 9u, 31u, 64u, 1001u}) {
            const auto base = random_buffer(rng, n);
            const auto delta = random_buffer(rng, n, -1.2, 1.2);
            std::vector<float> a(n), b(n);
            ref.add_clamp01(base.data(), delta.data(), n, a.data());
            vec->add_clamp01(base.data(), delta.data(), n, b.data());
            CHECK(a == b);
            ref.mul(base.data(), delta.data(), n, a.data());
            vec->mul(base.data(), delta.data(), n, b.data());
            CHECK(a == b);
        }
    }

    SUBCASE("reductions agree to 1e-12 relative") {
        for (std::size_t n : {5u, 64u, 4093u, 100000u}) {
            const auto a = random_buffer(rng, n);
            const auto b = random_buffer(rng, n);
            std::vector<double> w(n);
            for (auto& v : w) {
                v = rng.uniform(0.0, 2.0);
            }
            const double s1 = ref.sum_abs_diff(a.data(), b.data(), n);
            const double v1 = vec->sum_abs_diff(a.data(), b.data(), n);
            CHECK(std::abs(s1 - v1) <= 1e-12 * std::max(1.0, std::abs(s1)));
            const double s2 = ref.sum_abs_diff_weighted(a.data(), b.data(), w.data(), n);
            const double v2 = vec->sum_abs_diff_weighted(a.data(), b.data(), w.data(), n);
            CHECK(std::abs(s2 - v2) <= 1e-12 * std::max(1.0, std::abs(s2)));
            const double s3 = ref.sum_sq_diff(a.data(), b.data(), n);
            const double v3 = vec->sum_sq_diff(a.data(), b.data(), n);
            CHECK(std::abs(s3 - v3) <= 1e-12 * std::max(1.0, std::abs(s3)));
        }
    }
}

TEST_CASE("active backend is one of the published tables") {
    const auto& k = kernels::active();
    const bool is_scalar = &k == &kernels::scalar();
    const bool is_avx2 = kernels::avx2() != nullptr && &k == kernels::avx2();
    CHECK((is_scalar || is_avx2));
    CHECK(k.name != nullptr);
}
