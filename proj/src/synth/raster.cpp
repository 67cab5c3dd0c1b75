#include "greenforge/synth.hpp"

#include <cmath>

#include "greenforge/error.hpp"
#include "synth_internal.hpp"

namespace greenforge {

namespace synth_detail {

const double kTwoPi = 6.283185307179586476925286766559;
const int kBoundarySteps = 360;

// Smooth periodic value noise on a ring: `cells` uniform control values in
// [-1,1], smoothstep-interpolated, so n(t) is C1, bounded, and 2pi-periodic.
std::vector<double> noise_controls(std::uint64_t seed, int cells) {
    SeededRng rng(seed);
    std::vector<double> c(static_cast<std::size_t>(cells));
    for (auto& v : c) {
        v = rng.uniform(-1.0, 1.0);
    }
    return c;
}

double periodic_noise(const std::vector<double>& controls, double t) {
    const int n = int(controls.size());
    double pos = t / kTwoPi * double(n);
    pos -= std::floor(pos / double(n)) * double(n); // wrap into [0, n)
    const int i0 = std::min(n - 1, int(pos));
    const int i1 = (i0 + 1) % n;
    const double f = pos - double(i0);
    const double s = f * f * (3.0 - 2.0 * f);
    return controls[std::size_t(i0)] + (controls[std::size_t(i1)] - controls[std::size_t(i0)]) * s;
}

// Boundary radius per angular step: r(t) = 1 + amplitude * n(t).
std::vector<double> boundary_radii(const DefectSpec& spec, int noise_cells) {
    std::vector<double> r(kBoundarySteps, 1.0);
    if (spec.boundary_noise_amplitude > 0.0) {
        const auto controls = noise_controls(spec.boundary_noise_seed, noise_cells);
        for (int i = 0; i < kBoundarySteps; ++i) {
            const double t = kTwoPi * double(i) / double(kBoundarySteps);
            r[std::size_t(i)] = 1.0 + spec.boundary_noise_amplitude * periodic_noise(controls, t);
        }
    }
    return r;
}

double radius_at(const std::vector<double>& radii, double theta) {
    double pos = theta / kTwoPi * double(kBoundarySteps);
    pos -= std::floor(pos / double(kBoundarySteps)) * double(kBoundarySteps);
    const int i0 = std::min(kBoundarySteps - 1, int(pos));
    const int i1 = (i0 + 1) % kBoundarySteps;
    const double f = pos - double(i0);
    return radii[std::size_t(i0)] + (radii[std::size_t(i1)] - radii[std::size_t(i0)]) * f;
}

// Closest point on the core segment [center - half, center + half].
void closest_core_point(const DefectSpec& spec, double px, double py,
                        double& qx, double& qy) {
    const double hx = spec.core_half_x;
    const double hy = spec.core_half_y;
    const double hh = hx * hx + hy * hy;
    if (hh == 0.0) {
        qx = spec.center_x;
        qy = spec.center_y;
        return;
    }
    double s = ((px - spec.center_x) * hx + (py - spec.center_y) * hy) / hh;
    s = s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s);
    qx = spec.center_x + s * hx;
    qy = spec.center_y + s * hy;
}

void validate_spec(const DefectSpec& spec) {
    if (!(spec.semi_axis_x > 0.0) || !(spec.semi_axis_y > 0.0)) {
        throw DomainError("rasterize_defect: semi-axes must be positive");
    }
    if (spec.boundary_noise_amplitude < 0.0 || spec.boundary_noise_amplitude >= 1.0) {
        throw DomainError("rasterize_defect: boundary noise amplitude must lie in [0, 1)");
    }
    if (spec.boundary_noise_cells < 2) {
        throw DomainError("rasterize_defect: boundary noise needs at least 2 cells");
    }
}

} // namespace synth_detail

GrayField rasterize_defect(const DefectSpec& spec, int width, int height) {
    using namespace synth_detail;
    validate_spec(spec);
    if (width < 1 || height < 1) {
        throw DomainError("rasterize_defect: image dimensions must be positive");
    }

    GrayField out(width, height, 0.0f);

    const double rmax = 1.0 + spec.boundary_noise_amplitude;
    const double reach_x = std::fabs(spec.core_half_x) + spec.semi_axis_x * rmax;
    const double reach_y = std::fabs(spec.core_half_y) + spec.semi_axis_y * rmax;
    const int x0 = std::max(0, int(std::floor(spec.center_x - reach_x)));
    const int x1 = std::min(width - 1, int(std::ceil(spec.center_x + reach_x)));
    const int y0 = std::max(0, int(std::floor(spec.center_y - reach_y)));
    const int y1 = std::min(height - 1, int(std::ceil(spec.center_y + reach_y)));
    if (x0 > x1 || y0 > y1) {
        return out;
    }

    const auto radii = boundary_radii(spec, spec.boundary_noise_cells);
    const bool noisy = spec.boundary_noise_amplitude > 0.0;

    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            double qx, qy;
            closest_core_point(spec, double(x), double(y), qx, qy);
            const double u = (double(x) - qx) / spec.semi_axis_x;
            const double v = (double(y) - qy) / spec.semi_axis_y;
            const double rho = std::sqrt(u * u + v * v);
            double d = 0.0;
            if (rho > 0.0) {
                double r = 1.0;
                if (noisy) {
                    double theta = std::atan2(v, u);
                    if (theta < 0.0) theta += kTwoPi;
                    r = radius_at(radii, theta);
                }
                d = rho / r;
            }
            const double intensity = 1.0 - d * d;
            if (intensity > 0.0) {
                out.at(x, y) = float(intensity);
            }
        }
    }
    return out;
}

} // namespace greenforge
