#include "greenforge/image.hpp"

#include <algorithm>

namespace greenforge {

GrayField::GrayField(int width, int height, float fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw DomainError("GrayField dimensions must be at least 1x1");
    }
    values_.assign(std::size_t(width) * std::size_t(height), fill);
}

RasterImage::RasterImage(int width, int height, std::array<float, 3> fill)
    : width_(width), height_(height) {
    for (int c = 0; c < 3; ++c) {
        planes_[c] = GrayField(width, height, std::clamp(fill[c], 0.0f, 1.0f));
    }
}

void RasterImage::set_clamped(Channel c, int x, int y, float value) {
    plane(c).at(x, y) = std::clamp(value, 0.0f, 1.0f);
}

RasterImage RasterImage::from_planes(GrayField red, GrayField green, GrayField blue) {
    if (!red.same_size(green) || !red.same_size(blue)) {
        throw DomainError("RasterImage planes must share dimensions");
    }
    RasterImage img;
    img.width_ = red.width();
    img.height_ = red.height();
    img.planes_ = {std::move(red), std::move(green), std::move(blue)};
    img.clamp_to_unit();
    return img;
}

void RasterImage::clamp_to_unit() {
    for (auto& p : planes_) {
        float* v = p.data();
        for (std::size_t i = 0; i < p.size(); ++i) {
            v[i] = std::clamp(v[i], 0.0f, 1.0f);
        }
    }
}

void require_same_size(const RasterImage& a, const RasterImage& b, const std::string& op) {
    if (!a.same_size(b)) {
        throw DomainError(op + ": image dimensions do not match");
    }
}

void require_same_size(const RasterImage& a, const GrayField& b, const std::string& op) {
    if (!a.same_size(b)) {
        throw DomainError(op + ": image and field dimensions do not match");
    }
}

void require_same_size(const GrayField& a, const GrayField& b, const std::string& op) {
    if (!a.same_size(b)) {
        throw DomainError(op + ": field dimensions do not match");
    }
}

} // namespace greenforge
