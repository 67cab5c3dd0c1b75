#include <algorithm>
#include <cmath>

#include "greenforge/blur.hpp"
#include "greenforge/error.hpp"
#include "greenforge/kernels.hpp"
#include "greenforge/synth.hpp"

namespace greenforge {

namespace {

int label_index(int label) {
    for (std::size_t i = 0; i < CorruptionTable::kLabels.size(); ++i) {
        if (CorruptionTable::kLabels[i] == label) {
            return int(i);
        }
    }
    return -1;
}

} // namespace

CorruptionTable CorruptionTable::base() {
    CorruptionTable t;
    // kLabels order; columns R, G, B
    t.rows_ = {{
        {1.05, 0.85, 0.60}, // 9
        {0.80, 1.20, 0.50}, // 1
        {0.60, 0.80, 0.40}, // 2
        {0.60, 0.80, 0.40}, // 3
        {0.10, 0.60, 0.20}, // 4
        {0.10, 0.20, 0.20}, // 99
        {0.60, 0.95, 0.40}, // 20
    }};
    return t;
}

double CorruptionTable::multiplier(int label, Channel c) const {
    const int i = label_index(label);
    if (i < 0) {
        throw DomainError("corruption table: unknown ring label " + std::to_string(label));
    }
    return rows_[std::size_t(i)][std::size_t(c)];
}

void CorruptionTable::set_multiplier(int label, Channel c, double value) {
    const int i = label_index(label);
    if (i < 0) {
        throw DomainError("corruption table: unknown ring label " + std::to_string(label));
    }
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw DomainError("corruption table: multiplier must be finite and non-negative");
    }
    rows_[std::size_t(i)][std::size_t(c)] = value;
}

bool CorruptionTable::known_label(int label) {
    return label_index(label) >= 0;
}

RingField assign_rings(const GrayField& intensity, const std::array<double, 6>& band_edges) {
    for (std::size_t i = 1; i < band_edges.size(); ++i) {
        if (!(band_edges[i] > band_edges[i - 1])) {
            throw DomainError("assign_rings: band edges must be strictly increasing");
        }
    }
    if (!(band_edges.front() > 0.0) || !(band_edges.back() < 1.0)) {
        throw DomainError("assign_rings: band edges must lie inside (0, 1)");
    }

    // Outside-in: faint falloff gets the outermost ring's label.
    static constexpr std::array<std::uint8_t, 7> kBandLabels = {20, 9, 1, 2, 3, 4, 99};

    RingField out;
    out.intensity = intensity;
    out.labels.assign(intensity.size(), 0);
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        const float v = intensity.data()[i];
        if (v < 0.0f || v > 1.0f) {
            throw DomainError("assign_rings: intensity values must lie in [0, 1]");
        }
        if (v == 0.0f) {
            continue;
        }
        // Edges compare in float space: an intensity that rounds to the same
        // float as an edge belongs to the edge's (lower) band.
        std::size_t band = band_edges.size();
        for (std::size_t b = 0; b < band_edges.size(); ++b) {
            if (v <= float(band_edges[b])) {
                band = b;
                break;
            }
        }
        out.labels[i] = kBandLabels[band];
    }
    return out;
}

CorruptionTable perturb_table(const CorruptionTable& base, SeededRng& rng, double amplitude) {
    if (amplitude < 0.0 || amplitude >= 1.0) {
        throw DomainError("perturb_table: amplitude must lie in [0, 1)");
    }
    // Draw order is part of the format: labels in kLabels order, channels in
    // the dictionary's blue, green, red column order.
    static constexpr std::array<Channel, 3> kColumnOrder = {Channel::Blue, Channel::Green,
                                                            Channel::Red};
    CorruptionTable out = base;
    for (int label : CorruptionTable::kLabels) {
        for (Channel c : kColumnOrder) {
            const double factor = rng.uniform(1.0 - amplitude, 1.0 + amplitude);
            out.set_multiplier(label, c, base.multiplier(label, c) * factor);
        }
    }
    return out;
}

CorruptionOutput apply_corruption(const RasterImage& clean, const RingField& rings,
                                  const CorruptionTable& table, double sigma,
                                  double mask_threshold) {
    require_same_size(clean, rings.intensity, "apply_corruption");
    if (rings.labels.size() != rings.intensity.size()) {
        throw DomainError("apply_corruption: ring label buffer does not match its field");
    }
    if (sigma < 0.0) {
        throw DomainError("apply_corruption: sigma must be non-negative");
    }
    if (!(mask_threshold > 0.0)) {
        throw DomainError("apply_corruption: mask threshold must be positive");
    }

    bool valid[256] = {};
    valid[0] = true;
    for (int label : CorruptionTable::kLabels) {
        valid[label] = true;
    }
    for (std::uint8_t lab : rings.labels) {
        if (!valid[lab]) {
            throw DomainError("apply_corruption: unknown ring label " + std::to_string(lab));
        }
    }

    const int w = clean.width();
    const int h = clean.height();
    const std::size_t n = std::size_t(w) * std::size_t(h);
    const auto& k = kernels::active();

    std::array<GrayField, 3> deltas = {GrayField(w, h), GrayField(w, h), GrayField(w, h)};
    for (Channel c : kChannels) {
        double lut[256] = {};
        for (int label : CorruptionTable::kLabels) {
            lut[label] = table.multiplier(label, c) - 1.0;
        }
        const float* plane = clean.plane(c).data();
        const float* fall = rings.intensity.data();
        GrayField& delta = deltas[std::size_t(c)];
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint8_t lab = rings.labels[i];
            if (lab != 0) {
                delta.data()[i] = float(lut[lab] * double(plane[i]) * double(fall[i]));
            }
        }
        if (sigma > 0.0) {
            delta = gaussian_blur(delta, sigma);
        }
    }

    CorruptionOutput out{RasterImage(w, h), GrayField(w, h)};
    for (Channel c : kChannels) {
        k.add_clamp01(clean.plane(c).data(), deltas[std::size_t(c)].data(), n,
                      out.defected.plane(c).data());
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::max({std::fabs(double(deltas[0].data()[i])),
                                   std::fabs(double(deltas[1].data()[i])),
                                   std::fabs(double(deltas[2].data()[i]))});
        out.mask.data()[i] = m > mask_threshold ? 1.0f : 0.0f;
    }
    return out;
}

SynthOutput synthesize_pair(const RasterImage& clean, std::uint64_t seed,
                            const SynthConfig& cfg) {
    cfg.validate();
    const int w = clean.width();
    const int h = clean.height();

    SeededRng rng(seed);
    DefectLayout layout = sample_layout(rng, w, h, cfg);

    GrayField merged(w, h);
    for (const DefectSpec& spec : layout.specs) {
        const GrayField field = rasterize_defect(spec, w, h);
        for (std::size_t i = 0; i < merged.size(); ++i) {
            merged.data()[i] = std::max(merged.data()[i], field.data()[i]);
        }
    }

    const RingField rings = assign_rings(merged, cfg.band_edges);
    const CorruptionTable table = perturb_table(CorruptionTable::base(), rng,
                                                cfg.perturb_amplitude);
    const double sigma = cfg.sigma_factor * double(w);
    CorruptionOutput corrupted = apply_corruption(clean, rings, table, sigma,
                                                  cfg.mask_threshold);
    return SynthOutput{std::move(corrupted.defected), std::move(corrupted.mask),
                       std::move(layout)};
}

} // namespace greenforge
