#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "greenforge/error.hpp"

namespace greenforge {

enum class Channel : int { Red = 0, Green = 1, Blue = 2 };

inline constexpr std::array<Channel, 3> kChannels{Channel::Red, Channel::Green, Channel::Blue};

/// Single-plane scalar field, row-major. Values are unclamped; the producer
/// defines the range (masks and falloff intensities live in [0,1],
/// intermediates such as corruption deltas are arbitrary).
class GrayField {
public:
    GrayField() = default;
    GrayField(int width, int height, float fill = 0.0f);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    float* data() { return values_.data(); }
    const float* data() const { return values_.data(); }

    float& at(int x, int y) { return values_[std::size_t(y) * std::size_t(width_) + std::size_t(x)]; }
    float at(int x, int y) const { return values_[std::size_t(y) * std::size_t(width_) + std::size_t(x)]; }

    bool same_size(const GrayField& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> values_;
};

/// Planar RGB image with every sample in [0,1]. Construction and the clamped
/// accessors maintain the range invariant; pipelines that write through raw
/// plane data restore it with clamp_to_unit() before handing the image on.
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(int width, int height, std::array<float, 3> fill = {0.0f, 0.0f, 0.0f});

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixels() const { return std::size_t(width_) * std::size_t(height_); }

    GrayField& plane(Channel c) { return planes_[static_cast<int>(c)]; }
    const GrayField& plane(Channel c) const { return planes_[static_cast<int>(c)]; }

    float at(Channel c, int x, int y) const { return plane(c).at(x, y); }
    void set_clamped(Channel c, int x, int y, float value);

    /// Builds an image from three same-sized planes, clamping every sample.
    static RasterImage from_planes(GrayField red, GrayField green, GrayField blue);

    void clamp_to_unit();

    bool same_size(const RasterImage& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }
    bool same_size(const GrayField& field) const {
        return width_ == field.width() && height_ == field.height();
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::array<GrayField, 3> planes_;
};

/// Throws DomainError unless both images share dimensions.
void require_same_size(const RasterImage& a, const RasterImage& b, const std::string& op);
void require_same_size(const RasterImage& a, const GrayField& b, const std::string& op);
void require_same_size(const GrayField& a, const GrayField& b, const std::string& op);

} // namespace greenforge
