#pragma once

#include <cstdint>
#include <vector>

#include "greenforge/synth.hpp"

namespace greenforge::synth_detail {

extern const double kTwoPi;
extern const int kBoundarySteps;

std::vector<double> noise_controls(std::uint64_t seed, int cells);
double periodic_noise(const std::vector<double>& controls, double t);
std::vector<double> boundary_radii(const DefectSpec& spec, int noise_cells);
double radius_at(const std::vector<double>& radii, double theta);
void closest_core_point(const DefectSpec& spec, double px, double py,
                        double& qx, double& qy);
void validate_spec(const DefectSpec& spec);

} // namespace greenforge::synth_detail
