#pragma once

#include <vector>

#include "greenforge/image.hpp"

namespace greenforge {

/// Normalized 1-D Gaussian taps truncated at radius ceil(3*sigma).
/// Returned vector has 2*radius+1 entries; radius = (size-1)/2.
std::vector<float> gaussian_taps(double sigma);

/// Separable Gaussian convolution with edge replication. Output dimensions
/// match the input; constant fields pass through unchanged (the kernel is
/// renormalized after truncation). sigma <= 0 throws.
GrayField gaussian_blur(const GrayField& field, double sigma);

} // namespace greenforge
