#include "greenforge/blur.hpp"

#include <cmath>

#include "greenforge/kernels.hpp"

namespace greenforge {

std::vector<float> gaussian_taps(double sigma) {
    if (!(sigma > 0.0)) {
        throw DomainError("gaussian_taps: sigma must be positive");
    }
    const int radius = int(std::ceil(3.0 * sigma));
    std::vector<double> raw(std::size_t(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * (double(i) / sigma) * (double(i) / sigma));
        raw[std::size_t(i + radius)] = v;
        sum += v;
    }
    std::vector<float> taps(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        taps[i] = float(raw[i] / sum);
    }
    return taps;
}

GrayField gaussian_blur(const GrayField& field, double sigma) {
    if (!(sigma > 0.0)) {
        throw DomainError("gaussian_blur: sigma must be positive");
    }
    const auto taps = gaussian_taps(sigma);
    const int radius = int((taps.size() - 1) / 2);
    const auto& k = kernels::active();

    GrayField tmp(field.width(), field.height());
    GrayField out(field.width(), field.height());
    k.conv_h_replicate(field.data(), field.width(), field.height(), taps.data(), radius, tmp.data());
    k.conv_v_replicate(tmp.data(), field.width(), field.height(), taps.data(), radius, out.data());
    return out;
}

} // namespace greenforge
