#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include <json.hpp>

#include "greenforge/baseline.hpp"
#include "greenforge/error.hpp"
#include "greenforge/image_io.hpp"
#include "greenforge/loss.hpp"
#include "greenforge/metrics.hpp"
#include "greenforge/rng.hpp"
#include "greenforge/synth.hpp"

namespace greenforge::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool has_image_extension(const fs::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return e == ".png" || e == ".jpg" || e == ".jpeg";
}

std::vector<fs::path> list_images(const fs::path& dir, const char* what) {
    if (!fs::is_directory(dir)) {
        throw UsageError(std::string(what) + " directory does not exist: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return files;
}

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    unsigned n = jobs > 0 ? unsigned(jobs) : std::thread::hardware_concurrency();
    if (n < 1) {
        n = 1;
    }
    n = unsigned(std::min<std::size_t>(n, count));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> bail{false};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    const auto worker = [&] {
        while (!bail.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                bail = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

json psnr_to_json(double v) {
    if (std::isinf(v)) {
        return json("inf");
    }
    return json(v);
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.close();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace

void cmd_generate(const GenerateOptions& opts) {
    const auto files = list_images(opts.clean_dir, "input");
    if (files.empty()) {
        throw UsageError("no input images in " + opts.clean_dir.string());
    }
    if (opts.split && (*opts.split < 0.0 || *opts.split >= 1.0)) {
        throw UsageError("--split must lie in [0, 1)");
    }
    SynthConfig cfg = opts.config_path ? SynthConfig::load(*opts.config_path) : SynthConfig{};
    cfg.validate();

    // Probe pass: undecodable files are skipped with a warning and do not
    // consume an entry index.
    std::vector<char> decodable(files.size(), 0);
    std::mutex log_mutex;
    parallel_for(files.size(), opts.jobs, [&](std::size_t i) {
        try {
            load_image(files[i]);
            decodable[i] = 1;
        } catch (const FormatError& e) {
            std::lock_guard<std::mutex> lock(log_mutex);
            std::cerr << "warning: skipping undecodable input " << files[i].string() << " ("
                      << e.what() << ")\n";
        }
    });

    std::vector<fs::path> inputs;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (decodable[i]) {
            inputs.push_back(files[i]);
        }
    }
    if (inputs.empty()) {
        throw UsageError("no decodable input images in " + opts.clean_dir.string());
    }
    for (std::size_t i = 1; i < inputs.size(); ++i) {
        if (inputs[i].stem() == inputs[i - 1].stem()) {
            throw DomainError("duplicate filename stem among inputs: " +
                              inputs[i].stem().string());
        }
    }

    // Split, when requested, peels the tail of the stem-sorted list off as
    // the test set; entry indices (and so image seeds) ignore the split.
    std::vector<const char*> split_of(inputs.size(), nullptr);
    if (opts.split) {
        const std::size_t n_test =
            std::size_t(std::lround(*opts.split * double(inputs.size())));
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            split_of[i] = i + n_test >= inputs.size() ? "test" : "train";
        }
    }

    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const fs::path prefix = split_of[i] ? fs::path(split_of[i]) : fs::path();
        fs::create_directories(opts.out_dir / prefix / "defected");
        fs::create_directories(opts.out_dir / prefix / "masks");
    }

    std::vector<json> rows(inputs.size());
    std::vector<fs::path> written;
    std::mutex written_mutex;
    const auto track = [&](const fs::path& p) {
        std::lock_guard<std::mutex> lock(written_mutex);
        written.push_back(p);
    };

    try {
        parallel_for(inputs.size(), opts.jobs, [&](std::size_t i) {
            const RasterImage clean = load_image(inputs[i]);
            const std::uint64_t image_seed = derive_seed(opts.seed, std::uint64_t(i));
            const SynthOutput out = synthesize_pair(clean, image_seed, cfg);

            const std::string stem = inputs[i].stem().string();
            const fs::path prefix = split_of[i] ? fs::path(split_of[i]) : fs::path();
            const fs::path defected_rel = prefix / "defected" / (stem + ".png");
            const fs::path mask_rel = prefix / "masks" / (stem + ".png");
            track(opts.out_dir / defected_rel);
            // 16-bit: the mask marks changes down to 1e-4, well below an
            // 8-bit quantization step; the stored pair must resolve them.
            save_image(out.defected, opts.out_dir / defected_rel, 16);
            track(opts.out_dir / mask_rel);
            save_mask_png(out.mask, opts.out_dir / mask_rel);

            json row;
            row["clean_path"] = inputs[i].string();
            row["defected_path"] = defected_rel.generic_string();
            row["mask_path"] = mask_rel.generic_string();
            row["image_seed"] = image_seed;
            row["mix_class"] = to_string(out.layout.mix_class);
            row["defect_count"] = out.layout.specs.size();
            if (split_of[i]) {
                row["split"] = split_of[i];
            }
            rows[i] = std::move(row);
        });

        for (const json& row : rows) {
            for (const char* key : {"defected_path", "mask_path"}) {
                const fs::path p = opts.out_dir / fs::path(row.at(key).get<std::string>());
                if (!fs::exists(p)) {
                    throw IoError("manifest entry missing on disk: " + p.string());
                }
            }
        }
        json manifest;
        manifest["version"] = "1";
        manifest["dataset_seed"] = opts.seed;
        manifest["config_digest"] = cfg.digest();
        manifest["entries"] = rows;
        track(opts.out_dir / "manifest.json");
        write_text_file(opts.out_dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (...) {
        // A half-written dataset must not look usable.
        std::lock_guard<std::mutex> lock(written_mutex);
        for (const fs::path& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        throw;
    }

    std::cout << "wrote " << inputs.size() << " pairs to " << opts.out_dir.string() << "\n";
}

void cmd_derive_mask(const DeriveMaskOptions& opts) {
    if (!(opts.t > 0.0) || !(opts.t < 1.0)) {
        throw UsageError("--t must lie in (0, 1)");
    }
    const RasterImage input = load_image(opts.input_path);
    const RasterImage gt = load_image(opts.gt_path);
    require_same_size(input, gt, "derive-mask");

    GrayField mask(input.width(), input.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        double diff = 0.0;
        for (Channel c : kChannels) {
            diff = std::max(diff, std::fabs(double(input.plane(c).data()[i]) -
                                            double(gt.plane(c).data()[i])));
        }
        mask.data()[i] = diff > opts.t ? 1.0f : 0.0f;
    }
    save_mask_png(mask, opts.out_path);
}

void cmd_evaluate(const EvaluateOptions& opts) {
    if (opts.ms_scales < 1 || opts.ms_scales > 5) {
        throw UsageError("--ms-scales must lie in [1, 5]");
    }
    const auto restored = list_images(opts.restored_dir, "restored");
    const auto gt_files = list_images(opts.gt_dir, "ground-truth");

    std::map<std::string, fs::path> gt_by_stem;
    for (const fs::path& p : gt_files) {
        gt_by_stem[p.stem().string()] = p;
    }

    struct Pair {
        std::string stem;
        fs::path restored;
        fs::path gt;
        fs::path mask; // empty when cropout not requested
    };
    std::vector<Pair> pairs;
    std::vector<std::pair<std::string, std::string>> skipped; // name, reason

    std::map<std::string, fs::path> restored_by_stem;
    for (const fs::path& p : restored) {
        restored_by_stem[p.stem().string()] = p;
        const auto it = gt_by_stem.find(p.stem().string());
        if (it == gt_by_stem.end()) {
            skipped.emplace_back(p.filename().string(), "no ground-truth file with this stem");
            continue;
        }
        Pair pair{p.stem().string(), p, it->second, {}};
        if (opts.mask_dir) {
            const fs::path mask_path = *opts.mask_dir / (pair.stem + ".png");
            if (!fs::exists(mask_path)) {
                skipped.emplace_back(p.filename().string(), "no mask file with this stem");
                continue;
            }
            pair.mask = mask_path;
        }
        pairs.push_back(std::move(pair));
    }
    for (const fs::path& p : gt_files) {
        if (!restored_by_stem.count(p.stem().string())) {
            skipped.emplace_back(p.filename().string(), "no restored file with this stem");
        }
    }

    struct Row {
        bool ok = false;
        std::string reason;
        double psnr_db = 0.0;
        double ms_ssim_v = 0.0;
        std::optional<double> cropout;
    };
    std::vector<Row> results(pairs.size());
    parallel_for(pairs.size(), opts.jobs, [&](std::size_t i) {
        Row& row = results[i];
        try {
            const RasterImage pred = load_image(pairs[i].restored);
            const RasterImage ref = load_image(pairs[i].gt);
            row.psnr_db = psnr(pred, ref);
            row.ms_ssim_v = ms_ssim(pred, ref, opts.ms_scales);
            if (!pairs[i].mask.empty()) {
                const GrayField mask = load_mask_png(pairs[i].mask);
                row.cropout = cropout_ssim(pred, ref, mask);
            }
            row.ok = true;
        } catch (const std::exception& e) {
            row.reason = e.what();
        }
    });

    std::string lines;
    std::size_t ok_count = 0;
    double psnr_sum = 0.0;
    double ms_sum = 0.0;
    double crop_sum = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Row& row = results[i];
        if (!row.ok) {
            skipped.emplace_back(pairs[i].stem, row.reason);
            continue;
        }
        ++ok_count;
        psnr_sum += row.psnr_db;
        ms_sum += row.ms_ssim_v;
        json j;
        j["pair_id"] = pairs[i].stem;
        j["psnr_db"] = psnr_to_json(row.psnr_db);
        j["ms_ssim"] = row.ms_ssim_v;
        if (row.cropout) {
            crop_sum += *row.cropout;
            j["cropout_ssim"] = *row.cropout;
        }
        lines += j.dump();
        lines += "\n";
    }

    json aggregate;
    aggregate["pairs"] = ok_count;
    if (ok_count > 0) {
        aggregate["mean_psnr_db"] = psnr_to_json(psnr_sum / double(ok_count));
        aggregate["mean_ms_ssim"] = ms_sum / double(ok_count);
        if (opts.mask_dir) {
            aggregate["mean_cropout_ssim"] = crop_sum / double(ok_count);
        }
    }
    json skipped_json = json::array();
    for (const auto& [name, reason] : skipped) {
        skipped_json.push_back(json{{"name", name}, {"reason", reason}});
    }
    aggregate["skipped"] = std::move(skipped_json);

    json tail;
    tail["aggregate"] = aggregate;
    lines += tail.dump();
    lines += "\n";
    write_text_file(opts.out_report, lines);
    std::cout << tail.dump(2) << "\n";

    if (ok_count == 0) {
        throw DomainError("no pair was evaluated successfully");
    }
}

void cmd_loss(const LossOptions& opts) {
    const RasterImage pred = load_image(opts.pred_path);
    const RasterImage gt = load_image(opts.gt_path);
    const RasterImage input = load_image(opts.input_path);
    const LossReport report = combined_loss(pred, gt, input, opts.w, opts.t);

    json j;
    j["spatial"] = report.spatial;
    j["frequency"] = report.frequency;
    j["combined"] = report.combined;
    j["frequency_weight"] = report.frequency_weight;
    j["w"] = opts.w;
    j["t"] = opts.t;
    std::cout << j.dump(2) << "\n";
}

void cmd_baseline(const BaselineOptions& opts) {
    const RasterImage img = load_image(opts.defected_path);
    const GrayField mask = load_mask_png(opts.mask_path);
    require_same_size(img, mask, "baseline");
    const RasterImage restored = histogram_match_region(img, mask, opts.annulus);
    save_image(restored, opts.out_path, 16); // keeps untouched pixels byte-stable

}

} // namespace greenforge::cli
