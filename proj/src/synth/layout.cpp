#include "greenforge/synth.hpp"

#include <algorithm>
#include <cmath>

#include "greenforge/error.hpp"
#include "synth_internal.hpp"

namespace greenforge {

namespace {

using synth_detail::closest_core_point;
using synth_detail::kTwoPi;

// Upper bound on the fraction of image pixels a defect can light up.
// The image is tiled into integer-sized cells; a cell contributes all of its
// pixels when its center, in the ellipse's normalized coordinates, comes
// within the noise-inflated boundary radius plus the cell's own normalized
// half-diagonal. The normalized distance to the core segment is 1-Lipschitz,
// so every pixel with positive falloff lives in a counted cell and the
// estimate can only overshoot.
double footprint_fraction_bound(const DefectSpec& spec, int width, int height) {
    const int cells_per_side = 64;
    const int cw = (width + cells_per_side - 1) / cells_per_side;
    const int ch = (height + cells_per_side - 1) / cells_per_side;
    const double rmax = 1.0 + spec.boundary_noise_amplitude;

    std::int64_t covered = 0;
    for (int y0 = 0; y0 < height; y0 += ch) {
        const int y1 = std::min(height, y0 + ch);
        const double cy = 0.5 * double(y0 + y1 - 1);
        const double ry = 0.5 * double(y1 - 1 - y0);
        for (int x0 = 0; x0 < width; x0 += cw) {
            const int x1 = std::min(width, x0 + cw);
            const double cx = 0.5 * double(x0 + x1 - 1);
            const double rx = 0.5 * double(x1 - 1 - x0);

            double qx, qy;
            closest_core_point(spec, cx, cy, qx, qy);
            const double u = (cx - qx) / spec.semi_axis_x;
            const double v = (cy - qy) / spec.semi_axis_y;
            const double rho = std::sqrt(u * u + v * v);
            const double nx = rx / spec.semi_axis_x;
            const double ny = ry / spec.semi_axis_y;
            const double slack = std::sqrt(nx * nx + ny * ny);
            if (rho <= rmax + slack) {
                covered += std::int64_t(x1 - x0) * std::int64_t(y1 - y0);
            }
        }
    }
    return double(covered) / (double(width) * double(height));
}

DefectSpec sample_spot(SeededRng& rng, int width, int height, const SynthConfig& cfg) {
    const double diameter = std::max(
        1.0, rng.uniform(cfg.spot_diameter_min_frac * double(width),
                         cfg.spot_diameter_max_frac * double(width)));
    const double major = 0.5 * diameter;
    const double minor = major * rng.uniform(cfg.spot_aspect_min, 1.0);
    const bool major_on_x = rng.uniform01() < 0.5;

    DefectSpec s;
    s.kind = DefectKind::Spot;
    s.center_x = rng.uniform(0.0, double(width));
    s.center_y = rng.uniform(0.0, double(height));
    s.semi_axis_x = major_on_x ? major : minor;
    s.semi_axis_y = major_on_x ? minor : major;
    s.boundary_noise_seed = rng.next_u64();
    s.boundary_noise_amplitude = cfg.noise_amplitude;
    s.boundary_noise_cells = cfg.noise_cells;
    return s;
}

DefectSpec sample_large(SeededRng& rng, int width, int height, const SynthConfig& cfg) {
    const double base = double(std::min(width, height));

    DefectSpec s;
    s.kind = DefectKind::Large;
    s.boundary_noise_amplitude = cfg.noise_amplitude;
    s.boundary_noise_cells = cfg.noise_cells;

    for (int attempt = 0; attempt < 10; ++attempt) {
        s.semi_axis_x = rng.uniform(cfg.large_axis_min_frac, cfg.large_axis_max_frac) * base;
        s.semi_axis_y = rng.uniform(cfg.large_axis_min_frac, cfg.large_axis_max_frac) * base;

        // Center sits past one of the four edges so only a cap of the
        // ellipse reaches into the frame.
        const int side = rng.uniform_int(0, 3);
        const double along = rng.uniform(-0.2, 1.2);
        const double depth = rng.uniform(0.05, 0.6);
        switch (side) {
        case 0:
            s.center_x = -depth * s.semi_axis_x;
            s.center_y = along * double(height);
            break;
        case 1:
            s.center_x = double(width - 1) + depth * s.semi_axis_x;
            s.center_y = along * double(height);
            break;
        case 2:
            s.center_x = along * double(width);
            s.center_y = -depth * s.semi_axis_y;
            break;
        default:
            s.center_x = along * double(width);
            s.center_y = double(height - 1) + depth * s.semi_axis_y;
            break;
        }

        s.core_half_x = 0.0;
        s.core_half_y = 0.0;
        if (rng.uniform01() < cfg.linear_core_fraction) {
            const double len = rng.uniform(0.2, 0.6) * std::min(s.semi_axis_x, s.semi_axis_y);
            const double phi = rng.uniform(0.0, kTwoPi);
            s.core_half_x = len * std::cos(phi);
            s.core_half_y = len * std::sin(phi);
        }
        s.boundary_noise_seed = rng.next_u64();

        if (footprint_fraction_bound(s, width, height) <= cfg.large_area_max_frac) {
            return s;
        }
    }

    // Resampling failed; shrink the last candidate until it fits. The center
    // is strictly outside the frame, so the footprint eventually hits zero.
    while (footprint_fraction_bound(s, width, height) > cfg.large_area_max_frac) {
        s.semi_axis_x *= 0.8;
        s.semi_axis_y *= 0.8;
        s.core_half_x *= 0.8;
        s.core_half_y *= 0.8;
    }
    return s;
}

} // namespace

DefectLayout sample_layout(SeededRng& rng, int width, int height, const SynthConfig& cfg) {
    cfg.validate();
    if (width < 64 || height < 64) {
        throw DomainError("sample_layout: image must be at least 64x64");
    }

    DefectLayout layout;
    const double roll = rng.uniform01();
    if (roll < cfg.mix_spots) {
        layout.mix_class = MixClass::SpotsOnly;
    } else if (roll < cfg.mix_spots + cfg.mix_large) {
        layout.mix_class = MixClass::LargeOnly;
    } else {
        layout.mix_class = MixClass::Both;
    }

    int spots = 0;
    int larges = 0;
    if (layout.mix_class != MixClass::LargeOnly) {
        spots = rng.uniform_int(cfg.spot_count_min, cfg.spot_count_max);
    }
    if (layout.mix_class != MixClass::SpotsOnly) {
        larges = rng.uniform_int(cfg.large_count_min, cfg.large_count_max);
    }

    layout.specs.reserve(std::size_t(spots + larges));
    for (int i = 0; i < spots; ++i) {
        layout.specs.push_back(sample_spot(rng, width, height, cfg));
    }
    for (int i = 0; i < larges; ++i) {
        layout.specs.push_back(sample_large(rng, width, height, cfg));
    }
    return layout;
}

} // namespace greenforge
