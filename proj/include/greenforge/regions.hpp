#pragma once

#include <cstdint>
#include <vector>

#include "greenforge/image.hpp"

namespace greenforge {

struct Region {
    int min_x = 0;
    int min_y = 0;
    int max_x = 0; // inclusive
    int max_y = 0; // inclusive
    std::int64_t pixel_count = 0;
};

/// 8-connectivity components of mask pixels (value > 0.5), in row-major
/// first-encounter order. When `labels` is given it receives a per-pixel
/// component id (1-based; 0 = background) the same size as the mask.
std::vector<Region> connected_components(const GrayField& mask,
                                         std::vector<int>* labels = nullptr);

/// Chebyshev dilation: every pixel within chessboard distance `radius` of a
/// set pixel (value > 0.5) becomes 1.
GrayField dilate(const GrayField& mask, int radius);

} // namespace greenforge
