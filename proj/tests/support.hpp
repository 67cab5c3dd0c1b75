#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "greenforge/image.hpp"
#include "greenforge/rng.hpp"

namespace testutil {

inline greenforge::RasterImage constant_image(int w, int h, float r, float g, float b) {
    greenforge::GrayField pr(w, h, r), pg(w, h, g), pb(w, h, b);
    return greenforge::RasterImage::from_planes(std::move(pr), std::move(pg), std::move(pb));
}

inline greenforge::RasterImage random_image(greenforge::SeededRng& rng, int w, int h) {
    greenforge::RasterImage img(w, h);
    for (greenforge::Channel c : greenforge::kChannels) {
        for (std::size_t i = 0; i < img.plane(c).size(); ++i) {
            img.plane(c).data()[i] = float(rng.uniform01());
        }
    }
    return img;
}

/// Smooth low-frequency image, stand-in for a clean photograph.
inline greenforge::RasterImage smooth_image(std::uint64_t seed, int w, int h) {
    greenforge::SeededRng rng(seed);
    double ax[3], ay[3], ph[3], base[3];
    for (int c = 0; c < 3; ++c) {
        ax[c] = rng.uniform(1.0, 3.0);
        ay[c] = rng.uniform(1.0, 3.0);
        ph[c] = rng.uniform(0.0, 6.28318530717958647692);
        base[c] = rng.uniform(0.35, 0.65);
    }
    greenforge::RasterImage img(w, h);
    for (int c = 0; c < 3; ++c) {
        auto& plane = img.plane(greenforge::kChannels[std::size_t(c)]);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double u = double(x) / double(w);
                const double v = double(y) / double(h);
                const double s = base[c] + 0.18 * std::sin(ax[c] * 6.28318 * u + ph[c]) *
                                               std::cos(ay[c] * 6.28318 * v);
                plane.at(x, y) = float(std::clamp(s, 0.0, 1.0));
            }
        }
    }
    return img;
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path = base / ("greenforge-" + tag + "-" + std::to_string(::getpid()) + "-" +
                       std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

/// Runs the installed CLI binary; returns the process exit code.
inline int run_cli(const std::string& args, const std::string& redirect = " >/dev/null 2>&1") {
    const std::string cmd = std::string("\"") + GREENFORGE_BIN + "\" " + args + redirect;
    const int status = std::system(cmd.c_str());
    if (status < 0) {
        return -1;
    }
    return WEXITSTATUS(status);
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace testutil
