#pragma once

#include "greenforge/image.hpp"

namespace greenforge {

/// Classical defect restoration: for every mask component, histogram-match
/// the component's pixels to a surrounding annulus of clean (non-mask)
/// pixels, per channel, with 256-bin interpolated CDF matching. The annulus
/// starts `annulus_width` pixels wide and widens until it holds at least 256
/// reference pixels. The correction ramps in linearly over the component's
/// outer 3 pixels; everything outside the mask is returned bit-identical.
/// `allow_empty_mask` relaxes the nonempty-mask precondition (identity).
RasterImage histogram_match_region(const RasterImage& img, const GrayField& mask,
                                   int annulus_width = 16,
                                   bool allow_empty_mask = false);

} // namespace greenforge
