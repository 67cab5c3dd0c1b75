#include "greenforge/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "greenforge/error.hpp"
#include "greenforge/kernels.hpp"
#include "greenforge/regions.hpp"

namespace greenforge {

namespace {

constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
constexpr double kWindowSigma = 1.5;
constexpr int kWindow = 11;
constexpr std::array<double, 5> kMsExponents = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

std::vector<double> window_taps(int window) {
    const int radius = window / 2;
    std::vector<double> taps(static_cast<std::size_t>(window));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double x = double(i) / kWindowSigma;
        taps[std::size_t(i + radius)] = std::exp(-0.5 * x * x);
        sum += taps[std::size_t(i + radius)];
    }
    for (auto& t : taps) {
        t /= sum;
    }
    return taps;
}

// Valid-mode separable weighted filter; output is (w-k+1) x (h-k+1).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::vector<double>& taps, int& ow, int& oh) {
    const int k = int(taps.size());
    ow = w - k + 1;
    oh = h - k + 1;
    if (ow <= 0 || oh <= 0) {
        throw DomainError("ssim window exceeds image extent");
    }
    std::vector<double> tmp(std::size_t(ow) * std::size_t(h));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t) {
                acc += taps[std::size_t(t)] * src[std::size_t(y) * std::size_t(w) + std::size_t(x + t)];
            }
            tmp[std::size_t(y) * std::size_t(ow) + std::size_t(x)] = acc;
        }
    }
    std::vector<double> out(std::size_t(ow) * std::size_t(oh));
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t) {
                acc += taps[std::size_t(t)] * tmp[std::size_t(y + t) * std::size_t(ow) + std::size_t(x)];
            }
            out[std::size_t(y) * std::size_t(ow) + std::size_t(x)] = acc;
        }
    }
    return out;
}

std::vector<double> to_double(const GrayField& plane) {
    std::vector<double> out(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) {
        out[i] = double(plane.data()[i]);
    }
    return out;
}

struct WindowMeans {
    double ssim = 0.0;       // full SSIM per window, unclamped
    double cs_clamped = 0.0; // contrast-structure, clamped at 0 per window
    double luminance = 0.0;
};

WindowMeans window_means(const std::vector<double>& a, const std::vector<double>& b,
                         int w, int h, int window) {
    const std::size_t n = std::size_t(w) * std::size_t(h);
    std::vector<double> aa(n), bb(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
    }
    const auto taps = window_taps(window);
    int ow = 0, oh = 0;
    const auto ma = filter_valid(a, w, h, taps, ow, oh);
    const auto mb = filter_valid(b, w, h, taps, ow, oh);
    const auto maa = filter_valid(aa, w, h, taps, ow, oh);
    const auto mbb = filter_valid(bb, w, h, taps, ow, oh);
    const auto mab = filter_valid(ab, w, h, taps, ow, oh);

    WindowMeans sums;
    const std::size_t count = std::size_t(ow) * std::size_t(oh);
    for (std::size_t i = 0; i < count; ++i) {
        const double mu_a = ma[i];
        const double mu_b = mb[i];
        const double va = maa[i] - mu_a * mu_a;
        const double vb = mbb[i] - mu_b * mu_b;
        const double cov = mab[i] - mu_a * mu_b;
        const double t1 = 2.0 * mu_a * mu_b + kC1;
        const double t2 = 2.0 * cov + kC2;
        const double d1 = mu_a * mu_a + mu_b * mu_b + kC1;
        const double d2 = va + vb + kC2;
        sums.ssim += (t1 * t2) / (d1 * d2);
        sums.cs_clamped += std::max(0.0, t2 / d2);
        sums.luminance += t1 / d1;
    }
    sums.ssim /= double(count);
    sums.cs_clamped /= double(count);
    sums.luminance /= double(count);
    return sums;
}

int reduced_window(int min_dim) {
    int k = std::min(kWindow, min_dim);
    if (k % 2 == 0) {
        --k;
    }
    return k;
}

double ssim_with_window(const RasterImage& pred, const RasterImage& ref, int window) {
    double sum = 0.0;
    for (Channel c : kChannels) {
        const auto a = to_double(pred.plane(c));
        const auto b = to_double(ref.plane(c));
        sum += window_means(a, b, pred.width(), pred.height(), window).ssim;
    }
    return sum / 3.0;
}

void downsample_half(std::vector<double>& v, int& w, int& h) {
    const int ow = w / 2;
    const int oh = h / 2;
    std::vector<double> out(std::size_t(ow) * std::size_t(oh));
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            const std::size_t i0 = std::size_t(2 * y) * std::size_t(w) + std::size_t(2 * x);
            const std::size_t i1 = i0 + std::size_t(w);
            out[std::size_t(y) * std::size_t(ow) + std::size_t(x)] =
                0.25 * (v[i0] + v[i0 + 1] + v[i1] + v[i1 + 1]);
        }
    }
    v = std::move(out);
    w = ow;
    h = oh;
}

RasterImage crop(const RasterImage& img, int x0, int y0, int x1, int y1) {
    const int cw = x1 - x0 + 1;
    const int ch = y1 - y0 + 1;
    RasterImage out(cw, ch);
    for (Channel c : kChannels) {
        for (int y = 0; y < ch; ++y) {
            for (int x = 0; x < cw; ++x) {
                out.plane(c).at(x, y) = img.plane(c).at(x0 + x, y0 + y);
            }
        }
    }
    return out;
}

} // namespace

double psnr(const RasterImage& pred, const RasterImage& ref) {
    require_same_size(pred, ref, "psnr");
    const auto& k = kernels::active();
    const std::size_t n = pred.plane(Channel::Red).size();
    double sum = 0.0;
    for (Channel c : kChannels) {
        sum += k.sum_sq_diff(pred.plane(c).data(), ref.plane(c).data(), n);
    }
    if (sum == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double mse = sum / (double(n) * 3.0);
    return 10.0 * std::log10(1.0 / mse);
}

double ssim(const RasterImage& pred, const RasterImage& ref) {
    require_same_size(pred, ref, "ssim");
    if (pred.width() < kWindow || pred.height() < kWindow) {
        throw DomainError("ssim: image must be at least 11x11");
    }
    return ssim_with_window(pred, ref, kWindow);
}

double ms_ssim(const RasterImage& pred, const RasterImage& ref, int scales) {
    require_same_size(pred, ref, "ms_ssim");
    if (scales < 1 || scales > 5) {
        throw DomainError("ms_ssim: scales must lie in [1, 5]");
    }
    const int need = kWindow << (scales - 1);
    if (pred.width() < need || pred.height() < need) {
        throw DomainError("ms_ssim: image must be at least " + std::to_string(need) + "x" +
                          std::to_string(need) + " for " + std::to_string(scales) +
                          " scales; request fewer scales for smaller images");
    }

    std::array<double, 5> expo = kMsExponents;
    if (scales < 5) {
        double sum = 0.0;
        for (int s = 0; s < scales; ++s) {
            sum += expo[std::size_t(s)];
        }
        for (int s = 0; s < scales; ++s) {
            expo[std::size_t(s)] /= sum;
        }
    }

    double channel_sum = 0.0;
    for (Channel c : kChannels) {
        auto a = to_double(pred.plane(c));
        auto b = to_double(ref.plane(c));
        int w = pred.width();
        int h = pred.height();
        double value = 1.0;
        for (int s = 0; s < scales; ++s) {
            const WindowMeans m = window_means(a, b, w, h, kWindow);
            value *= std::pow(m.cs_clamped, expo[std::size_t(s)]);
            if (s + 1 == scales) {
                value *= std::pow(std::max(0.0, m.luminance), expo[std::size_t(s)]);
            } else {
                int wb = w, hb = h; // downsample halves the dims; keep b's in step
                downsample_half(a, w, h);
                downsample_half(b, wb, hb);
            }
        }
        channel_sum += value;
    }
    return channel_sum / 3.0;
}

double cropout_ssim(const RasterImage& pred, const RasterImage& ref, const GrayField& mask) {
    require_same_size(pred, ref, "cropout_ssim");
    require_same_size(pred, mask, "cropout_ssim");
    const auto regions = connected_components(mask);
    if (regions.empty()) {
        throw DomainError("cropout_ssim: mask has no set pixels");
    }

    const int pad = 8;
    double weighted = 0.0;
    double total_area = 0.0;
    for (const Region& r : regions) {
        const int x0 = std::max(0, r.min_x - pad);
        const int y0 = std::max(0, r.min_y - pad);
        const int x1 = std::min(pred.width() - 1, r.max_x + pad);
        const int y1 = std::min(pred.height() - 1, r.max_y + pad);
        const RasterImage ca = crop(pred, x0, y0, x1, y1);
        const RasterImage cb = crop(ref, x0, y0, x1, y1);
        const int window = reduced_window(std::min(ca.width(), ca.height()));
        const double score = ssim_with_window(ca, cb, window);
        const double area = double(x1 - x0 + 1) * double(y1 - y0 + 1);
        weighted += score * area;
        total_area += area;
    }
    return weighted / total_area;
}

MetricsReport compute_metrics(const RasterImage& pred, const RasterImage& ref,
                              const GrayField* mask, int ms_scales) {
    MetricsReport report;
    report.psnr_db = psnr(pred, ref);
    report.ssim = ssim(pred, ref);
    report.ms_ssim = ms_ssim(pred, ref, ms_scales);
    if (mask) {
        report.cropout_ssim = cropout_ssim(pred, ref, *mask);
    }
    return report;
}

} // namespace greenforge
