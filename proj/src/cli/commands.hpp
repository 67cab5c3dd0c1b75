#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace greenforge::cli {

/// Bad invocation-level input (empty input dir, invalid flag combination);
/// maps to exit code 2 while data errors map to 3 and I/O errors to 4.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerateOptions {
    std::filesystem::path clean_dir;
    std::filesystem::path out_dir;
    std::optional<std::filesystem::path> config_path;
    std::uint64_t seed = 0;
    int jobs = 0;                // <= 0 picks the hardware default
    std::optional<double> split; // test fraction; unset = no split
};

struct DeriveMaskOptions {
    std::filesystem::path input_path;
    std::filesystem::path gt_path;
    std::filesystem::path out_path;
    double t = 0.1;
};

struct EvaluateOptions {
    std::filesystem::path restored_dir;
    std::filesystem::path gt_dir;
    std::optional<std::filesystem::path> mask_dir;
    std::filesystem::path out_report;
    int jobs = 0;
    int ms_scales = 5;
};

struct LossOptions {
    std::filesystem::path pred_path;
    std::filesystem::path gt_path;
    std::filesystem::path input_path;
    double w = 1.0;
    double t = 0.1;
};

struct BaselineOptions {
    std::filesystem::path defected_path;
    std::filesystem::path mask_path;
    std::filesystem::path out_path;
    int annulus = 16;
};

void cmd_generate(const GenerateOptions& opts);
void cmd_derive_mask(const DeriveMaskOptions& opts);
void cmd_evaluate(const EvaluateOptions& opts);
void cmd_loss(const LossOptions& opts);
void cmd_baseline(const BaselineOptions& opts);

} // namespace greenforge::cli
