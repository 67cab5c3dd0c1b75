#include "greenforge/synth.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "greenforge/error.hpp"

namespace greenforge {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw DomainError("config key '" + key + "': cannot parse '" + value + "'");
    }
    if (pos != value.size()) {
        throw DomainError("config key '" + key + "': trailing junk in '" + value + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) {
        throw DomainError("config key '" + key + "' must be an integer");
    }
    return int(v);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

void SynthConfig::validate() const {
    const double mix_sum = mix_spots + mix_large + mix_both;
    if (mix_spots < 0 || mix_large < 0 || mix_both < 0 || std::fabs(mix_sum - 1.0) > 1e-9) {
        throw DomainError("config: mix probabilities must be non-negative and sum to 1");
    }
    if (spot_count_min < 1 || spot_count_max < spot_count_min ||
        large_count_min < 1 || large_count_max < large_count_min) {
        throw DomainError("config: defect count ranges must satisfy 1 <= min <= max");
    }
    if (!(spot_diameter_min_frac > 0) || spot_diameter_max_frac < spot_diameter_min_frac) {
        throw DomainError("config: spot diameter fractions out of order");
    }
    if (!(spot_aspect_min > 0) || spot_aspect_min > 1.0) {
        throw DomainError("config: spot_aspect_min must lie in (0, 1]");
    }
    if (!(large_axis_min_frac > 0) || large_axis_max_frac < large_axis_min_frac) {
        throw DomainError("config: large axis fractions out of order");
    }
    if (!(large_area_max_frac > 0) || large_area_max_frac > 1.0) {
        throw DomainError("config: large_area_max_frac must lie in (0, 1]");
    }
    if (linear_core_fraction < 0 || linear_core_fraction > 1) {
        throw DomainError("config: linear_core_fraction must lie in [0, 1]");
    }
    if (noise_amplitude < 0 || noise_amplitude >= 1.0) {
        throw DomainError("config: noise_amplitude must lie in [0, 1)");
    }
    if (noise_cells < 2) {
        throw DomainError("config: noise_cells must be at least 2");
    }
    double prev = 0.0;
    for (double e : band_edges) {
        if (!(e > prev) || e >= 1.0) {
            throw DomainError("config: band_edges must be strictly increasing within (0, 1)");
        }
        prev = e;
    }
    if (perturb_amplitude < 0 || perturb_amplitude >= 1.0) {
        throw DomainError("config: perturb_amplitude must lie in [0, 1)");
    }
    if (sigma_factor < 0) {
        throw DomainError("config: sigma_factor must be non-negative");
    }
    if (!(mask_threshold > 0)) {
        throw DomainError("config: mask_threshold must be positive");
    }
}

std::string SynthConfig::canonical_text() const {
    std::ostringstream out;
    out << "band_edges = ";
    for (std::size_t i = 0; i < band_edges.size(); ++i) {
        out << (i ? "," : "") << fmt(band_edges[i]);
    }
    out << "\n";
    out << "large_area_max_frac = " << fmt(large_area_max_frac) << "\n";
    out << "large_axis_max_frac = " << fmt(large_axis_max_frac) << "\n";
    out << "large_axis_min_frac = " << fmt(large_axis_min_frac) << "\n";
    out << "large_count_max = " << large_count_max << "\n";
    out << "large_count_min = " << large_count_min << "\n";
    out << "linear_core_fraction = " << fmt(linear_core_fraction) << "\n";
    out << "mask_threshold = " << fmt(mask_threshold) << "\n";
    out << "mix_both = " << fmt(mix_both) << "\n";
    out << "mix_large = " << fmt(mix_large) << "\n";
    out << "mix_spots = " << fmt(mix_spots) << "\n";
    out << "noise_amplitude = " << fmt(noise_amplitude) << "\n";
    out << "noise_cells = " << noise_cells << "\n";
    out << "perturb_amplitude = " << fmt(perturb_amplitude) << "\n";
    out << "sigma_factor = " << fmt(sigma_factor) << "\n";
    out << "spot_aspect_min = " << fmt(spot_aspect_min) << "\n";
    out << "spot_count_max = " << spot_count_max << "\n";
    out << "spot_count_min = " << spot_count_min << "\n";
    out << "spot_diameter_max_frac = " << fmt(spot_diameter_max_frac) << "\n";
    out << "spot_diameter_min_frac = " << fmt(spot_diameter_min_frac) << "\n";
    return out.str();
}

std::string SynthConfig::digest() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a64(canonical_text()));
    return buf;
}

void SynthConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write config '" + path.string() + "'");
    }
    out << canonical_text();
    if (!out.flush()) {
        throw IoError("failed writing config '" + path.string() + "'");
    }
}

SynthConfig SynthConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config '" + path.string() + "'");
    }
    SynthConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw DomainError("config '" + path.string() + "' line " +
                              std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "band_edges") {
            std::array<double, 6> edges{};
            std::stringstream ss(value);
            std::string item;
            std::size_t i = 0;
            while (std::getline(ss, item, ',')) {
                if (i >= edges.size()) {
                    throw DomainError("config: band_edges takes exactly 6 values");
                }
                edges[i++] = parse_double(key, trim(item));
            }
            if (i != edges.size()) {
                throw DomainError("config: band_edges takes exactly 6 values");
            }
            cfg.band_edges = edges;
        } else if (key == "mix_spots") {
            cfg.mix_spots = parse_double(key, value);
        } else if (key == "mix_large") {
            cfg.mix_large = parse_double(key, value);
        } else if (key == "mix_both") {
            cfg.mix_both = parse_double(key, value);
        } else if (key == "spot_count_min") {
            cfg.spot_count_min = parse_int(key, value);
        } else if (key == "spot_count_max") {
            cfg.spot_count_max = parse_int(key, value);
        } else if (key == "large_count_min") {
            cfg.large_count_min = parse_int(key, value);
        } else if (key == "large_count_max") {
            cfg.large_count_max = parse_int(key, value);
        } else if (key == "spot_diameter_min_frac") {
            cfg.spot_diameter_min_frac = parse_double(key, value);
        } else if (key == "spot_diameter_max_frac") {
            cfg.spot_diameter_max_frac = parse_double(key, value);
        } else if (key == "spot_aspect_min") {
            cfg.spot_aspect_min = parse_double(key, value);
        } else if (key == "large_axis_min_frac") {
            cfg.large_axis_min_frac = parse_double(key, value);
        } else if (key == "large_axis_max_frac") {
            cfg.large_axis_max_frac = parse_double(key, value);
        } else if (key == "large_area_max_frac") {
            cfg.large_area_max_frac = parse_double(key, value);
        } else if (key == "linear_core_fraction") {
            cfg.linear_core_fraction = parse_double(key, value);
        } else if (key == "noise_amplitude") {
            cfg.noise_amplitude = parse_double(key, value);
        } else if (key == "noise_cells") {
            cfg.noise_cells = parse_int(key, value);
        } else if (key == "perturb_amplitude") {
            cfg.perturb_amplitude = parse_double(key, value);
        } else if (key == "sigma_factor") {
            cfg.sigma_factor = parse_double(key, value);
        } else if (key == "mask_threshold") {
            cfg.mask_threshold = parse_double(key, value);
        } else {
            throw DomainError("config '" + path.string() + "': unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

const char* to_string(MixClass mix) {
    switch (mix) {
        case MixClass::SpotsOnly: return "spots_only";
        case MixClass::LargeOnly: return "large_only";
        case MixClass::Both: return "both";
    }
    return "unknown";
}

MixClass mix_class_from_string(const std::string& s) {
    if (s == "spots_only") return MixClass::SpotsOnly;
    if (s == "large_only") return MixClass::LargeOnly;
    if (s == "both") return MixClass::Both;
    throw DomainError("unknown mix class '" + s + "'");
}

int DefectLayout::spot_count() const {
    int n = 0;
    for (const auto& s : specs) n += s.kind == DefectKind::Spot ? 1 : 0;
    return n;
}

int DefectLayout::large_count() const {
    int n = 0;
    for (const auto& s : specs) n += s.kind == DefectKind::Large ? 1 : 0;
    return n;
}

} // namespace greenforge
