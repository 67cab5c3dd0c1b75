#include "greenforge/baseline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "greenforge/error.hpp"
#include "greenforge/regions.hpp"

namespace greenforge {

namespace {

constexpr int kBins = 256;
constexpr int kFeather = 3;
constexpr int kMinReference = 256;

int bin_of(float v) {
    return std::min(kBins - 1, int(double(v) * double(kBins)));
}

std::array<double, kBins> cdf_of(const std::array<double, kBins>& hist) {
    std::array<double, kBins> cdf{};
    double total = 0.0;
    for (double h : hist) {
        total += h;
    }
    double run = 0.0;
    for (int i = 0; i < kBins; ++i) {
        run += hist[std::size_t(i)];
        cdf[std::size_t(i)] = run / total;
    }
    cdf[kBins - 1] = 1.0; // pin against rounding so lookups never run off the end
    return cdf;
}

double match_value(const std::array<double, kBins>& cdf_src,
                   const std::array<double, kBins>& cdf_ref, float v) {
    const double s = cdf_src[std::size_t(bin_of(v))];
    const auto it = std::lower_bound(cdf_ref.begin(), cdf_ref.end(), s);
    const int j = std::min(kBins - 1, int(it - cdf_ref.begin()));
    const double lo = j == 0 ? 0.0 : cdf_ref[std::size_t(j - 1)];
    const double t = cdf_ref[std::size_t(j)] > lo ? (s - lo) / (cdf_ref[std::size_t(j)] - lo) : 1.0;
    return (double(j) + t) / double(kBins);
}

// Chebyshev depth of each component pixel into its component, capped at the
// feather width. Pixels past the image border count as interior so defects
// hugging the frame edge still receive full correction there.
std::vector<std::uint8_t> feather_depth(const std::vector<int>& labels, int id,
                                        int w, int h) {
    std::vector<std::uint8_t> depth(labels.size(), 0);
    const auto in_comp = [&](int x, int y) {
        if (x < 0 || x >= w || y < 0 || y >= h) {
            return true;
        }
        return labels[std::size_t(y) * std::size_t(w) + std::size_t(x)] == id;
    };
    for (int pass = 1; pass <= kFeather; ++pass) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t i = std::size_t(y) * std::size_t(w) + std::size_t(x);
                if (labels[i] != id || depth[i] != 0) {
                    continue;
                }
                bool at_ring = false;
                for (int dy = -1; dy <= 1 && !at_ring; ++dy) {
                    for (int dx = -1; dx <= 1 && !at_ring; ++dx) {
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (!in_comp(nx, ny)) {
                            at_ring = pass == 1;
                        } else if (nx >= 0 && nx < w && ny >= 0 && ny < h) {
                            const std::size_t ni =
                                std::size_t(ny) * std::size_t(w) + std::size_t(nx);
                            if (depth[ni] == pass - 1 && depth[ni] != 0) {
                                at_ring = true;
                            }
                        }
                    }
                }
                if (at_ring) {
                    depth[i] = std::uint8_t(pass);
                }
            }
        }
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == id && depth[i] == 0) {
            depth[i] = kFeather; // interior beyond the ramp
        }
    }
    return depth;
}

} // namespace

RasterImage histogram_match_region(const RasterImage& img, const GrayField& mask,
                                   int annulus_width, bool allow_empty_mask) {
    require_same_size(img, mask, "histogram_match_region");
    if (annulus_width < 4) {
        throw DomainError("histogram_match_region: annulus width must be at least 4");
    }

    std::vector<int> labels;
    const auto regions = connected_components(mask, &labels);
    if (regions.empty()) {
        if (allow_empty_mask) {
            return img;
        }
        throw DomainError("histogram_match_region: mask has no set pixels");
    }

    const int w = img.width();
    const int h = img.height();
    RasterImage out = img;

    for (std::size_t ri = 0; ri < regions.size(); ++ri) {
        const int id = int(ri) + 1;

        GrayField comp(w, h);
        std::vector<std::size_t> comp_pixels;
        comp_pixels.reserve(std::size_t(regions[ri].pixel_count));
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == id) {
                comp.data()[i] = 1.0f;
                comp_pixels.push_back(i);
            }
        }

        // Annulus of non-mask pixels around the component, widened until it
        // holds enough reference samples or saturates the frame.
        std::vector<std::size_t> ring_pixels;
        for (int radius = annulus_width;; radius *= 2) {
            ring_pixels.clear();
            const GrayField grown = dilate(comp, radius);
            for (std::size_t i = 0; i < grown.size(); ++i) {
                if (grown.data()[i] > 0.5f && !(mask.data()[i] > 0.5f)) {
                    ring_pixels.push_back(i);
                }
            }
            if (int(ring_pixels.size()) >= kMinReference || radius >= std::max(w, h)) {
                break;
            }
        }
        if (ring_pixels.empty()) {
            throw DomainError("histogram_match_region: no clean reference pixels "
                              "around mask component");
        }

        const auto depth = feather_depth(labels, id, w, h);

        for (Channel c : kChannels) {
            const GrayField& plane = img.plane(c);
            std::array<double, kBins> hist_src{};
            std::array<double, kBins> hist_ref{};
            for (std::size_t i : comp_pixels) {
                hist_src[std::size_t(bin_of(plane.data()[i]))] += 1.0;
            }
            for (std::size_t i : ring_pixels) {
                hist_ref[std::size_t(bin_of(plane.data()[i]))] += 1.0;
            }
            const auto cdf_src = cdf_of(hist_src);
            const auto cdf_ref = cdf_of(hist_ref);

            GrayField& dst = out.plane(c);
            for (std::size_t i : comp_pixels) {
                const float v = plane.data()[i];
                const float matched = float(match_value(cdf_src, cdf_ref, v));
                if (depth[i] >= kFeather) {
                    dst.data()[i] = matched;
                } else {
                    const float alpha = float(depth[i]) / float(kFeather);
                    dst.data()[i] = std::clamp(v + alpha * (matched - v), 0.0f, 1.0f);
                }
            }
        }
    }
    return out;
}

} // namespace greenforge
