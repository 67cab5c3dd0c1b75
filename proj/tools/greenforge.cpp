#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "greenforge/error.hpp"

namespace {

using namespace greenforge;

int run(CLI::App& app, int argc, char** argv) {
    cli::GenerateOptions gen_opts;
    std::string gen_config;
    double gen_split = -1.0;
    auto* gen = app.add_subcommand("generate",
                                   "synthesize defected/mask pairs from clean images");
    gen->add_option("input", gen_opts.clean_dir, "directory of clean images")->required();
    gen->add_option("--out", gen_opts.out_dir, "output directory")->required();
    gen->add_option("--seed", gen_opts.seed, "dataset seed (default 0)");
    gen->add_option("--config", gen_config, "synthesis config file (key = value lines)");
    gen->add_option("--jobs", gen_opts.jobs, "worker threads (default: hardware)");
    gen->add_option("--split", gen_split, "test fraction; stem-sorted tail becomes test/");

    cli::DeriveMaskOptions dm_opts;
    auto* dm = app.add_subcommand("derive-mask",
                                  "threshold |input - gt| into a binary defect mask");
    dm->add_option("input", dm_opts.input_path, "defected image")->required();
    dm->add_option("gt", dm_opts.gt_path, "clean ground-truth image")->required();
    dm->add_option("--out", dm_opts.out_path, "output mask PNG")->required();
    dm->add_option("--t", dm_opts.t, "channel-max threshold (default 0.1)");

    cli::EvaluateOptions ev_opts;
    std::string ev_mask_dir;
    auto* ev = app.add_subcommand("evaluate", "PSNR / MS-SSIM (+ cropout SSIM) over pairs");
    ev->add_option("restored", ev_opts.restored_dir, "directory of restored images")->required();
    ev->add_option("gt", ev_opts.gt_dir, "directory of ground-truth images")->required();
    ev->add_option("--mask-dir", ev_mask_dir, "mask directory; enables cropout SSIM");
    ev->add_option("--out", ev_opts.out_report, "report path (JSON lines)")->required();
    ev->add_option("--jobs", ev_opts.jobs, "worker threads (default: hardware)");
    ev->add_option("--ms-scales", ev_opts.ms_scales,
                   "MS-SSIM scales, 1-5 (reduced mode below 5; default 5)");

    cli::LossOptions loss_opts;
    auto* loss = app.add_subcommand("loss", "weighted L1 + frequency loss for one triple");
    loss->add_option("pred", loss_opts.pred_path, "prediction image")->required();
    loss->add_option("gt", loss_opts.gt_path, "ground-truth image")->required();
    loss->add_option("input", loss_opts.input_path, "defected input image")->required();
    loss->add_option("--w", loss_opts.w, "non-defect weight: 0.1, 0.5 or 1.0 (default 1.0)");
    loss->add_option("--t", loss_opts.t, "defect threshold (default 0.1)");

    cli::BaselineOptions base_opts;
    auto* base = app.add_subcommand("baseline", "histogram-match defect regions to surroundings");
    base->add_option("defected", base_opts.defected_path, "defected image")->required();
    base->add_option("mask", base_opts.mask_path, "binary mask PNG")->required();
    base->add_option("--out", base_opts.out_path, "output image")->required();
    base->add_option("--annulus", base_opts.annulus, "reference ring width in px (default 16)");

    app.require_subcommand(1);
    app.parse(argc, argv);

    if (gen->parsed()) {
        if (!gen_config.empty()) {
            gen_opts.config_path = gen_config;
        }
        if (gen->count("--split") > 0) {
            gen_opts.split = gen_split;
        }
        cli::cmd_generate(gen_opts);
    } else if (dm->parsed()) {
        cli::cmd_derive_mask(dm_opts);
    } else if (ev->parsed()) {
        if (!ev_mask_dir.empty()) {
            ev_opts.mask_dir = ev_mask_dir;
        }
        cli::cmd_evaluate(ev_opts);
    } else if (loss->parsed()) {
        if (loss_opts.w != 0.1 && loss_opts.w != 0.5 && loss_opts.w != 1.0) {
            throw cli::UsageError("--w must be 0.1, 0.5 or 1.0");
        }
        cli::cmd_loss(loss_opts);
    } else if (base->parsed()) {
        cli::cmd_baseline(base_opts);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"paired greening-defect dataset tooling"};
    try {
        return run(app, argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const cli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
