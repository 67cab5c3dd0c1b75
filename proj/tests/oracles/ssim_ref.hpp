#pragma once

// Direct per-window SSIM / MS-SSIM reference. Independent of the separable
// implementation under test: builds an explicit normalized 2D Gaussian weight
// grid and evaluates centered moments window-by-window.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "greenforge/image.hpp"

namespace oracle {

inline std::vector<double> window_weights_ref(int window, double sigma = 1.5) {
    const int half = window / 2;
    std::vector<double> weights(std::size_t(window) * std::size_t(window));
    double sum = 0.0;
    for (int j = 0; j < window; ++j) {
        for (int i = 0; i < window; ++i) {
            const double dx = double(i - half);
            const double dy = double(j - half);
            const double v = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma * sigma));
            weights[std::size_t(j) * std::size_t(window) + std::size_t(i)] = v;
            sum += v;
        }
    }
    for (double& v : weights) {
        v /= sum;
    }
    return weights;
}

struct WindowStatsRef {
    double ssim = 0.0;
    double cs_clamped = 0.0;
    double luminance = 0.0;
};

inline WindowStatsRef window_stats_ref(const greenforge::GrayField& a,
                                       const greenforge::GrayField& b, int window) {
    const double c1 = 0.01 * 0.01;
    const double c2 = 0.03 * 0.03;
    const auto weights = window_weights_ref(window);
    const int w = a.width();
    const int h = a.height();
    if (w < window || h < window) {
        throw std::runtime_error("oracle: image smaller than window");
    }
    WindowStatsRef acc;
    long count = 0;
    for (int y0 = 0; y0 + window <= h; ++y0) {
        for (int x0 = 0; x0 + window <= w; ++x0) {
            double mu_a = 0.0, mu_b = 0.0;
            for (int j = 0; j < window; ++j) {
                for (int i = 0; i < window; ++i) {
                    const double wt = weights[std::size_t(j) * std::size_t(window) + std::size_t(i)];
                    mu_a += wt * double(a.at(x0 + i, y0 + j));
                    mu_b += wt * double(b.at(x0 + i, y0 + j));
                }
            }
            double var_a = 0.0, var_b = 0.0, cov = 0.0;
            for (int j = 0; j < window; ++j) {
                for (int i = 0; i < window; ++i) {
                    const double wt = weights[std::size_t(j) * std::size_t(window) + std::size_t(i)];
                    const double da = double(a.at(x0 + i, y0 + j)) - mu_a;
                    const double db = double(b.at(x0 + i, y0 + j)) - mu_b;
                    var_a += wt * da * da;
                    var_b += wt * db * db;
                    cov += wt * da * db;
                }
            }
            const double lum = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
            const double cs = (2.0 * cov + c2) / (var_a + var_b + c2);
            acc.ssim += lum * cs;
            acc.cs_clamped += std::max(0.0, cs);
            acc.luminance += lum;
            ++count;
        }
    }
    acc.ssim /= double(count);
    acc.cs_clamped /= double(count);
    acc.luminance /= double(count);
    return acc;
}

inline double ssim_ref(const greenforge::RasterImage& a, const greenforge::RasterImage& b,
                       int window = 11) {
    double sum = 0.0;
    for (greenforge::Channel c : greenforge::kChannels) {
        sum += window_stats_ref(a.plane(c), b.plane(c), window).ssim;
    }
    return sum / 3.0;
}

inline greenforge::GrayField downsample_half_ref(const greenforge::GrayField& f) {
    const int ow = f.width() / 2;
    const int oh = f.height() / 2;
    greenforge::GrayField out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            out.at(x, y) = 0.25f * (f.at(2 * x, 2 * y) + f.at(2 * x + 1, 2 * y) +
                                    f.at(2 * x, 2 * y + 1) + f.at(2 * x + 1, 2 * y + 1));
        }
    }
    return out;
}

inline double ms_ssim_ref(const greenforge::RasterImage& a, const greenforge::RasterImage& b,
                          int scales = 5, int window = 11) {
    const double canonical[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    std::vector<double> expo(canonical, canonical + scales);
    if (scales < 5) {
        double total = 0.0;
        for (double e : expo) {
            total += e;
        }
        for (double& e : expo) {
            e /= total;
        }
    }
    double sum = 0.0;
    for (greenforge::Channel c : greenforge::kChannels) {
        greenforge::GrayField pa = a.plane(c);
        greenforge::GrayField pb = b.plane(c);
        double value = 1.0;
        for (int s = 0; s < scales; ++s) {
            const auto stats = window_stats_ref(pa, pb, window);
            value *= std::pow(stats.cs_clamped, expo[std::size_t(s)]);
            if (s == scales - 1) {
                value *= std::pow(std::max(0.0, stats.luminance), expo[std::size_t(s)]);
            } else {
                pa = downsample_half_ref(pa);
                pb = downsample_half_ref(pb);
            }
        }
        sum += value;
    }
    return sum / 3.0;
}

} // namespace oracle
