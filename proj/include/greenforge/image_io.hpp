#pragma once

#include <filesystem>

#include "greenforge/image.hpp"

namespace greenforge {

/// Decodes a PNG (8/16-bit) or JPEG (8-bit, input only) into [0,1] planes.
/// 8-bit samples map by s/255, 16-bit by s/65535; grayscale inputs are
/// replicated to all three planes; alpha is stripped.
RasterImage load_image(const std::filesystem::path& path);

/// Writes a lossless RGB PNG at the given bit depth (8 or 16).
/// Samples quantize by round(v * (2^depth - 1)).
void save_image(const RasterImage& img, const std::filesystem::path& path, int depth = 8);

/// Writes a single-channel 8-bit PNG: 255 where mask > 0.5, else 0.
void save_mask_png(const GrayField& mask, const std::filesystem::path& path);

/// Loads a mask written by save_mask_png (or any decodable image); returns a
/// field of 0/1 values, thresholding the red plane at 0.5.
GrayField load_mask_png(const std::filesystem::path& path);

} // namespace greenforge
