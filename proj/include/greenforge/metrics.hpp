#pragma once

#include <optional>

#include "greenforge/image.hpp"

namespace greenforge {

struct MetricsReport {
    double psnr_db = 0.0; // +infinity when the images are identical
    double ssim = 0.0;
    double ms_ssim = 0.0;
    std::optional<double> cropout_ssim;
};

/// 10*log10(1/MSE) on the [0,1] range, over all pixels and channels.
double psnr(const RasterImage& pred, const RasterImage& ref);

/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), C1=0.01^2,
/// C2=0.03^2, valid window positions only, per channel and averaged.
/// Requires both dimensions >= 11.
double ssim(const RasterImage& pred, const RasterImage& ref);

/// Multi-scale SSIM with the standard exponents, 2x2 mean-pool
/// downsampling, contrast-structure at every scale and luminance at the
/// last. `scales` below 5 is the explicit reduced-scale mode (exponents
/// renormalized); the image must hold 11*2^(scales-1) pixels per side.
double ms_ssim(const RasterImage& pred, const RasterImage& ref, int scales = 5);

/// Area-weighted mean SSIM over per-component crops of the mask (bounding
/// box + 8 px padding, clipped); crops smaller than the 11-px window fall
/// back to the largest odd window that fits.
double cropout_ssim(const RasterImage& pred, const RasterImage& ref,
                    const GrayField& mask);

MetricsReport compute_metrics(const RasterImage& pred, const RasterImage& ref,
                              const GrayField* mask = nullptr, int ms_scales = 5);

} // namespace greenforge
