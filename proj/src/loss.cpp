#include "greenforge/loss.hpp"

#include <cmath>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "greenforge/error.hpp"
#include "greenforge/kernels.hpp"

namespace greenforge {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    fftw_complex* p = nullptr;
    explicit FftwBuffer(std::size_t n) : p(fftw_alloc_complex(n)) {
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct FftwPlan {
    fftw_plan p = nullptr;
    FftwPlan(int h, int w, fftw_complex* in, fftw_complex* out) {
        std::lock_guard<std::mutex> lock(plan_mutex());
        p = fftw_plan_dft_2d(h, w, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        if (!p) throw std::runtime_error("fftw plan creation failed");
    }
    ~FftwPlan() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(p);
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
};

} // namespace

WeightMatrix weight_matrix(const RasterImage& input, const RasterImage& gt,
                           double w, double t) {
    require_same_size(input, gt, "weight_matrix");
    if (!(w > 0.0) || w > 1.0) {
        throw DomainError("weight_matrix: w must lie in (0, 1]");
    }
    if (!(t > 0.0) || !(t < 1.0)) {
        throw DomainError("weight_matrix: t must lie in (0, 1)");
    }

    WeightMatrix out;
    out.width = input.width();
    out.height = input.height();
    out.values.resize(input.pixels());
    const std::size_t n = out.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        double diff = 0.0;
        for (Channel c : kChannels) {
            const double d = std::fabs(double(input.plane(c).data()[i]) -
                                       double(gt.plane(c).data()[i]));
            diff = std::max(diff, d);
        }
        out.values[i] = diff > t ? 1.0 : w;
    }
    return out;
}

double spatial_loss(const RasterImage& pred, const RasterImage& gt,
                    const WeightMatrix& weights) {
    require_same_size(pred, gt, "spatial_loss");
    if (pred.width() != weights.width || pred.height() != weights.height) {
        throw DomainError("spatial_loss: weight matrix size mismatch");
    }

    const auto& k = kernels::active();
    const std::size_t n = weights.values.size();
    double sum = 0.0;
    for (Channel c : kChannels) {
        sum += k.sum_abs_diff_weighted(pred.plane(c).data(), gt.plane(c).data(),
                                       weights.values.data(), n);
    }
    return sum / (double(n) * 3.0);
}

double frequency_loss(const RasterImage& pred, const RasterImage& gt) {
    require_same_size(pred, gt, "frequency_loss");

    const int w = pred.width();
    const int h = pred.height();
    const std::size_t n = std::size_t(w) * std::size_t(h);

    FftwBuffer in(n), out(n);
    // One plan serves both transforms so identical inputs produce bitwise
    // identical spectra and the loss vanishes exactly.
    FftwPlan plan(h, w, in.p, out.p);
    std::vector<double> spec_a(2 * n);

    double sum = 0.0;
    for (Channel c : kChannels) {
        const float* a = pred.plane(c).data();
        const float* b = gt.plane(c).data();
        for (std::size_t i = 0; i < n; ++i) {
            in.p[i][0] = double(a[i]);
            in.p[i][1] = 0.0;
        }
        fftw_execute(plan.p);
        for (std::size_t i = 0; i < n; ++i) {
            spec_a[2 * i] = out.p[i][0];
            spec_a[2 * i + 1] = out.p[i][1];
        }
        for (std::size_t i = 0; i < n; ++i) {
            in.p[i][0] = double(b[i]);
            in.p[i][1] = 0.0;
        }
        fftw_execute(plan.p);
        for (std::size_t i = 0; i < n; ++i) {
            const double dr = spec_a[2 * i] - out.p[i][0];
            const double di = spec_a[2 * i + 1] - out.p[i][1];
            sum += std::sqrt(dr * dr + di * di);
        }
    }
    return sum / (double(n) * 3.0);
}

LossReport combined_loss(const RasterImage& pred, const RasterImage& gt,
                         const RasterImage& input, double w, double t,
                         double frequency_weight) {
    require_same_size(pred, input, "combined_loss");
    if (frequency_weight < 0.0) {
        throw DomainError("combined_loss: frequency weight must be non-negative");
    }

    LossReport report;
    report.frequency_weight = frequency_weight;
    report.spatial = spatial_loss(pred, gt, weight_matrix(input, gt, w, t));
    report.frequency = frequency_loss(pred, gt);
    report.combined = report.spatial + frequency_weight * report.frequency;
    return report;
}

} // namespace greenforge
