#pragma once

#include <cstddef>
#include <vector>

#include "greenforge/image.hpp"

namespace greenforge {

/// Per-pixel loss weights shared by the three channels: 1.0 where the
/// channel-max |input - gt| exceeds the threshold, w everywhere else.
struct WeightMatrix {
    int width = 0;
    int height = 0;
    std::vector<double> values; // row-major, one weight per pixel

    double at(int x, int y) const {
        return values[std::size_t(y) * std::size_t(width) + std::size_t(x)];
    }
};

struct LossReport {
    double spatial = 0.0;
    double frequency = 0.0;
    double combined = 0.0; // spatial + frequency_weight * frequency
    double frequency_weight = 0.1;
};

WeightMatrix weight_matrix(const RasterImage& input, const RasterImage& gt,
                           double w, double t = 0.1);

/// (1/N) * sum of W(x,y) * |pred - gt| over pixels and channels, N = w*h*3.
double spatial_loss(const RasterImage& pred, const RasterImage& gt,
                    const WeightMatrix& weights);

/// Mean complex-modulus difference of the two images' unnormalized forward
/// 2-D DFTs, over all bins and channels (N = w*h*3).
double frequency_loss(const RasterImage& pred, const RasterImage& gt);

LossReport combined_loss(const RasterImage& pred, const RasterImage& gt,
                         const RasterImage& input, double w, double t = 0.1,
                         double frequency_weight = 0.1);

} // namespace greenforge
