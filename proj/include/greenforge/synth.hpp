#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "greenforge/image.hpp"
#include "greenforge/rng.hpp"

namespace greenforge {

/// Tunables for the defect simulator. Defaults reproduce the published
/// behavior: 60/30/10 defect mix, 1-7 spots of 1-5% image width, 1-2 large
/// defects entering from outside the frame and covering at most a third of
/// the image, ring multipliers perturbed by +-20% per image.
struct SynthConfig {
    double mix_spots = 0.60;
    double mix_large = 0.30;
    double mix_both = 0.10;
    int spot_count_min = 1;
    int spot_count_max = 7;
    int large_count_min = 1;
    int large_count_max = 2;

    double spot_diameter_min_frac = 0.01; // of image width
    double spot_diameter_max_frac = 0.05;
    double spot_aspect_min = 0.6;         // minor/major axis ratio lower bound
    double large_axis_min_frac = 0.25;    // of min(width, height)
    double large_axis_max_frac = 0.70;
    double large_area_max_frac = 1.0 / 3.0;
    double linear_core_fraction = 0.2;    // large defects given a segment core

    double noise_amplitude = 0.15;        // boundary irregularity
    int noise_cells = 16;                 // control points of the periodic noise

    /// Upper intensity edges of the bands mapped to labels 20, 9, 1, 2, 3, 4;
    /// everything above the last edge is the dark core (99).
    std::array<double, 6> band_edges = {0.10, 0.25, 0.45, 0.60, 0.75, 0.92};

    double perturb_amplitude = 0.2;       // multiplier jitter, fraction of base
    double sigma_factor = 0.004;          // blur sigma = factor * width; 0 disables
    double mask_threshold = 1e-4;         // |delta| above this marks the mask

    void validate() const;

    /// Plain-text key = value round trip; unknown keys are rejected.
    static SynthConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    std::string canonical_text() const;
    std::string digest() const; // fnv1a-64 hex of canonical_text()
};

enum class DefectKind { Spot, Large };
enum class MixClass { SpotsOnly, LargeOnly, Both };

const char* to_string(MixClass mix);
MixClass mix_class_from_string(const std::string& s);

/// One defect to rasterize. Spot centers lie inside the image, Large centers
/// outside. A nonzero core half-extent turns the point origin into a short
/// segment, giving stadium-shaped damage from a linear source.
struct DefectSpec {
    DefectKind kind = DefectKind::Spot;
    double center_x = 0.0;
    double center_y = 0.0;
    double semi_axis_x = 1.0;
    double semi_axis_y = 1.0;
    std::uint64_t boundary_noise_seed = 0;
    double boundary_noise_amplitude = 0.0;
    int boundary_noise_cells = 16;
    double core_half_x = 0.0;
    double core_half_y = 0.0;
};

struct DefectLayout {
    MixClass mix_class = MixClass::SpotsOnly;
    std::vector<DefectSpec> specs;

    int spot_count() const;
    int large_count() const;
};

/// Per-pixel damage labels plus the falloff intensity they were derived
/// from. labels[p] == 0 exactly where intensity[p] == 0.
struct RingField {
    GrayField intensity;
    std::vector<std::uint8_t> labels;

    int width() const { return intensity.width(); }
    int height() const { return intensity.height(); }
    std::uint8_t label(int x, int y) const {
        return labels[std::size_t(y) * std::size_t(width()) + std::size_t(x)];
    }
};

/// Ring label -> per-channel intensity multiplier dictionary.
class CorruptionTable {
public:
    static constexpr std::array<int, 7> kLabels = {9, 1, 2, 3, 4, 99, 20};

    /// The published dictionary: label -> (blue, green, red) multipliers
    /// 9 -> (0.6, 0.85, 1.05), 1 -> (0.5, 1.2, 0.8), 2 -> (0.4, 0.8, 0.6),
    /// 3 -> (0.4, 0.8, 0.6), 4 -> (0.2, 0.6, 0.1), 99 -> (0.2, 0.2, 0.1),
    /// 20 -> (0.4, 0.95, 0.6).
    static CorruptionTable base();

    double multiplier(int label, Channel c) const;
    void set_multiplier(int label, Channel c, double value);

    static bool known_label(int label);

private:
    // rows follow kLabels order; columns indexed by Channel (R, G, B)
    std::array<std::array<double, 3>, 7> rows_{};
};

/// Draws the defect mix, counts, sizes, and placement for one image.
/// Deterministic given the rng state; throws below 64x64.
DefectLayout sample_layout(SeededRng& rng, int width, int height,
                           const SynthConfig& cfg = SynthConfig{});

/// Rasterizes one defect into a falloff intensity field: 1 at the origin,
/// 0 on and beyond the (irregular) boundary, 1-d^2 in between, where d is
/// the normalized radial distance measured against the boundary radius in
/// the pixel's direction. Pixels are sampled at integer coordinates.
GrayField rasterize_defect(const DefectSpec& spec, int width, int height);

/// Splits an intensity field into the ring bands of the corruption
/// dictionary, outside-in: 20, 9, 1, 2, 3, 4, 99. Zero stays unlabeled.
RingField assign_rings(const GrayField& intensity,
                       const std::array<double, 6>& band_edges = SynthConfig{}.band_edges);

/// Jitters every multiplier by an independent uniform factor in
/// [1-amplitude, 1+amplitude].
CorruptionTable perturb_table(const CorruptionTable& base, SeededRng& rng,
                              double amplitude = 0.2);

struct CorruptionOutput {
    RasterImage defected;
    GrayField mask; // 0/1
};

/// Applies the ring dictionary: per channel, delta = (p_c * I_c) - I_c on
/// labeled pixels, scaled by the falloff intensity, Gaussian-blurred with
/// sigma (sigma == 0 skips the blur, the test bypass), then added with
/// clamping. The mask marks pixels where any channel's blurred |delta|
/// exceeds mask_threshold.
CorruptionOutput apply_corruption(const RasterImage& clean, const RingField& rings,
                                  const CorruptionTable& table, double sigma,
                                  double mask_threshold = 1e-4);

struct SynthOutput {
    RasterImage defected;
    GrayField mask;
    DefectLayout layout;
};

/// Full pipeline: layout -> rasterize (merged by per-pixel max intensity)
/// -> rings -> perturbed dictionary -> corruption. Bit-identical output for
/// identical (clean, seed, cfg).
SynthOutput synthesize_pair(const RasterImage& clean, std::uint64_t seed,
                            const SynthConfig& cfg = SynthConfig{});

} // namespace greenforge
