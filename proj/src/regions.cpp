#include "greenforge/regions.hpp"

#include <algorithm>

#include "greenforge/error.hpp"

namespace greenforge {

std::vector<Region> connected_components(const GrayField& mask, std::vector<int>* labels) {
    const int w = mask.width();
    const int h = mask.height();
    std::vector<int> lab(mask.size(), 0);
    std::vector<Region> regions;
    std::vector<std::int64_t> stack;

    const auto set_at = [&](int x, int y) { return mask.at(x, y) > 0.5f; };

    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            const std::size_t si = std::size_t(sy) * std::size_t(w) + std::size_t(sx);
            if (!set_at(sx, sy) || lab[si] != 0) {
                continue;
            }
            const int id = int(regions.size()) + 1;
            Region r{sx, sy, sx, sy, 0};
            stack.clear();
            stack.push_back(std::int64_t(si));
            lab[si] = id;
            while (!stack.empty()) {
                const std::int64_t i = stack.back();
                stack.pop_back();
                const int x = int(i % w);
                const int y = int(i / w);
                ++r.pixel_count;
                r.min_x = std::min(r.min_x, x);
                r.max_x = std::max(r.max_x, x);
                r.min_y = std::min(r.min_y, y);
                r.max_y = std::max(r.max_y, y);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) {
                            continue;
                        }
                        const std::size_t ni =
                            std::size_t(ny) * std::size_t(w) + std::size_t(nx);
                        if (set_at(nx, ny) && lab[ni] == 0) {
                            lab[ni] = id;
                            stack.push_back(std::int64_t(ni));
                        }
                    }
                }
            }
            regions.push_back(r);
        }
    }
    if (labels) {
        *labels = std::move(lab);
    }
    return regions;
}

GrayField dilate(const GrayField& mask, int radius) {
    if (radius < 0) {
        throw DomainError("dilate: radius must be non-negative");
    }
    const int w = mask.width();
    const int h = mask.height();

    // Chebyshev balls are separable: a horizontal run-max followed by a
    // vertical one covers the full (2r+1)^2 neighborhood.
    GrayField tmp(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float v = 0.0f;
            const int lo = std::max(0, x - radius);
            const int hi = std::min(w - 1, x + radius);
            for (int t = lo; t <= hi && v == 0.0f; ++t) {
                if (mask.at(t, y) > 0.5f) v = 1.0f;
            }
            tmp.at(x, y) = v;
        }
    }
    GrayField out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float v = 0.0f;
            const int lo = std::max(0, y - radius);
            const int hi = std::min(h - 1, y + radius);
            for (int t = lo; t <= hi && v == 0.0f; ++t) {
                if (tmp.at(x, t) > 0.5f) v = 1.0f;
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

} // namespace greenforge
