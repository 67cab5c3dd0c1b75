#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "greenforge/image_io.hpp"
#include "greenforge/synth.hpp"
#include "support.hpp"

using namespace greenforge;
using nlohmann::json;
using testutil::TempDir;
using testutil::run_cli;

namespace {

void write_clean_set(const std::filesystem::path& dir, int count, int w = 192, int h = 192) {
    std::filesystem::create_directories(dir);
    for (int i = 0; i < count; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "plate_%02d.png", i);
        save_image(testutil::smooth_image(1000 + std::uint64_t(i), w, h), dir / name, 8);
    }
}

std::vector<json> read_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<json> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            rows.push_back(json::parse(line));
        }
    }
    return rows;
}

bool trees_identical(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::vector<std::filesystem::path> rel;
    for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
        if (e.is_regular_file()) {
            rel.push_back(std::filesystem::relative(e.path(), a));
        }
    }
    std::sort(rel.begin(), rel.end());
    for (const auto& r : rel) {
        if (!std::filesystem::exists(b / r)) {
            return false;
        }
        if (testutil::slurp(a / r) != testutil::slurp(b / r)) {
            return false;
        }
    }
    std::size_t count_b = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(b)) {
        count_b += e.is_regular_file() ? 1 : 0;
    }
    return count_b == rel.size();
}

} // namespace

TEST_CASE("generate produces a complete, reproducible dataset") {
    TempDir dir("cli-gen");
    const auto clean = dir.path / "clean";
    write_clean_set(clean, 3);

    const auto out1 = dir.path / "run1";
    const auto out2 = dir.path / "run2";
    CHECK(run_cli("generate \"" + clean.string() + "\" --out \"" + out1.string() +
                  "\" --seed 7") == 0);
    CHECK(run_cli("generate \"" + clean.string() + "\" --out \"" + out2.string() +
                  "\" --seed 7") == 0);

    const json manifest = json::parse(testutil::slurp(out1 / "manifest.json"));
    CHECK(manifest.at("version") == "1");
    CHECK(manifest.at("dataset_seed") == 7);
    CHECK(manifest.at("config_digest") == SynthConfig{}.digest());
    REQUIRE(manifest.at("entries").size() == 3);
    for (const auto& entry : manifest.at("entries")) {
        const auto defected = out1 / entry.at("defected_path").get<std::string>();
        const auto mask = out1 / entry.at("mask_path").get<std::string>();
        REQUIRE(std::filesystem::exists(defected));
        REQUIRE(std::filesystem::exists(mask));
        const RasterImage d = load_image(defected);
        CHECK(d.width() == 192);
        const GrayField m = load_mask_png(mask);
        CHECK(m.width() == 192);
        CHECK(entry.at("image_seed").is_number_unsigned());
        CHECK(entry.at("defect_count").get<int>() >= 1);
        const std::string mix = entry.at("mix_class").get<std::string>();
        CHECK((mix == "spots_only" || mix == "large_only" || mix == "both"));
    }
    // stems are processed in sorted order
    CHECK(manifest.at("entries")[0].at("clean_path").get<std::string>().find("plate_00") !=
          std::string::npos);

    CHECK(trees_identical(out1, out2));

    // a different seed changes the payload
    const auto out3 = dir.path / "run3";
    CHECK(run_cli("generate \"" + clean.string() + "\" --out \"" + out3.string() +
                  "\" --seed 8") == 0);
    CHECK_FALSE(trees_identical(out1, out3));
}

TEST_CASE("generate skips undecodable inputs with a warning") {
    TempDir dir("cli-skip");
    const auto clean = dir.path / "clean";
    write_clean_set(clean, 2);
    std::ofstream(clean / "broken.png", std::ios::binary) << "not a png at all";

    const auto out = dir.path / "out";
    const auto errfile = dir.path / "stderr.txt";
    CHECK(run_cli("generate \"" + clean.string() + "\" --out \"" + out.string() + "\"",
                  " >/dev/null 2>\"" + errfile.string() + "\"") == 0);
    const json manifest = json::parse(testutil::slurp(out / "manifest.json"));
    CHECK(manifest.at("entries").size() == 2);
    const std::string err = testutil::slurp(errfile);
    CHECK(err.find("skipping") != std::string::npos);
    CHECK(err.find("broken.png") != std::string::npos);
}

TEST_CASE("generate splits the stem-sorted tail into test") {
    TempDir dir("cli-split");
    const auto clean = dir.path / "clean";
    write_clean_set(clean, 3);
    const auto out = dir.path / "out";
    CHECK(run_cli("generate \"" + clean.string() + "\" --out \"" + out.string() +
                  "\" --split 0.34") == 0);
    const json manifest = json::parse(testutil::slurp(out / "manifest.json"));
    int train = 0, test = 0;
    for (const auto& entry : manifest.at("entries")) {
        const std::string split = entry.at("split").get<std::string>();
        if (split == "train") {
            ++train;
        } else if (split == "test") {
            ++test;
            CHECK(entry.at("defected_path").get<std::string>().find("test/") == 0);
        }
    }
    CHECK(train == 2);
    CHECK(test == 1);
    CHECK(std::filesystem::exists(out / "train" / "defected"));
    CHECK(std::filesystem::exists(out / "test" / "masks"));
}

TEST_CASE("generate usage errors exit with code 2") {
    TempDir dir("cli-gen-err");
    const auto missing = dir.path / "no-such-dir";
    const auto out = dir.path / "out";
    CHECK(run_cli("generate \"" + missing.string() + "\" --out \"" + out.string() + "\"") == 2);

    const auto empty = dir.path / "empty";
    std::filesystem::create_directories(empty);
    CHECK(run_cli("generate \"" + empty.string() + "\" --out \"" + out.string() + "\"") == 2);

    const auto clean = dir.path / "clean";
    write_clean_set(clean, 1, 96, 96);
    CHECK(run_cli("generate \"" + clean.string() + "\" --out \"" + out.string() +
                  "\" --split 1.0") == 2);
}

TEST_CASE("derive-mask thresholds the channel-max difference") {
    TempDir dir("cli-dm");
    const RasterImage clean = testutil::smooth_image(4, 96, 96);
    RasterImage defected = clean;
    for (int y = 30; y < 40; ++y) {
        for (int x = 50; x < 60; ++x) {
            defected.plane(Channel::Green).at(x, y) =
                std::min(1.0f, clean.plane(Channel::Green).at(x, y) + 0.3f);
        }
    }
    const auto clean_p = dir.path / "clean.png";
    const auto def_p = dir.path / "defected.png";
    save_image(clean, clean_p, 8);
    save_image(defected, def_p, 8);

    const auto mask_p = dir.path / "mask.png";
    CHECK(run_cli("derive-mask \"" + def_p.string() + "\" \"" + clean_p.string() +
                  "\" --out \"" + mask_p.string() + "\" --t 0.1") == 0);
    const GrayField mask = load_mask_png(mask_p);
    for (int y = 0; y < 96; ++y) {
        for (int x = 0; x < 96; ++x) {
            const bool boosted = x >= 50 && x < 60 && y >= 30 && y < 40;
            CHECK(mask.at(x, y) == (boosted ? 1.0f : 0.0f));
        }
    }

    // identical images yield an empty mask
    const auto empty_p = dir.path / "empty.png";
    CHECK(run_cli("derive-mask \"" + clean_p.string() + "\" \"" + clean_p.string() +
                  "\" --out \"" + empty_p.string() + "\"") == 0);
    const GrayField empty = load_mask_png(empty_p);
    for (std::size_t i = 0; i < empty.size(); ++i) {
        CHECK(empty.data()[i] == 0.0f);
    }
}

TEST_CASE("derive-mask failure modes") {
    TempDir dir("cli-dm-err");
    const auto a = dir.path / "a.png";
    const auto b = dir.path / "b.png";
    save_image(testutil::constant_image(32, 32, 0.5f, 0.5f, 0.5f), a, 8);
    save_image(testutil::constant_image(16, 32, 0.5f, 0.5f, 0.5f), b, 8);

    // size mismatch -> data error
    CHECK(run_cli("derive-mask \"" + a.string() + "\" \"" + b.string() + "\" --out \"" +
                  (dir.path / "m.png").string() + "\"") == 3);
    // unwritable output -> I/O error
    CHECK(run_cli("derive-mask \"" + a.string() + "\" \"" + a.string() +
                  "\" --out /no-such-dir/m.png") == 4);
    // t outside (0,1) -> usage error
    CHECK(run_cli("derive-mask \"" + a.string() + "\" \"" + a.string() + "\" --out \"" +
                  (dir.path / "m.png").string() + "\" --t 1.0") == 2);
}

TEST_CASE("evaluate writes rows plus an aggregate line") {
    TempDir dir("cli-eval");
    const auto gt = dir.path / "gt";
    write_clean_set(gt, 3);

    // restored = gt plus one unpaired file on each side
    const auto restored = dir.path / "restored";
    std::filesystem::create_directories(restored);
    for (const auto& e : std::filesystem::directory_iterator(gt)) {
        std::filesystem::copy_file(e.path(), restored / e.path().filename());
    }
    save_image(testutil::smooth_image(9, 64, 64), restored / "extra.png", 8);
    save_image(testutil::smooth_image(10, 64, 64), gt / "orphan.png", 8);

    const auto report = dir.path / "report.jsonl";
    CHECK(run_cli("evaluate \"" + restored.string() + "\" \"" + gt.string() + "\" --out \"" +
                  report.string() + "\"") == 0);

    const auto rows = read_report(report);
    REQUIRE(rows.size() == 4); // 3 pair rows + aggregate
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rows[i].at("psnr_db") == "inf");
        CHECK(rows[i].at("ms_ssim").get<double>() == 1.0);
        CHECK_FALSE(rows[i].contains("cropout_ssim"));
        CHECK(rows[i].at("pair_id").is_string());
    }
    const json agg = rows.back().at("aggregate");
    CHECK(agg.at("pairs") == 3);
    CHECK(agg.at("mean_psnr_db") == "inf");
    CHECK(agg.at("mean_ms_ssim").get<double>() == 1.0);
    CHECK_FALSE(agg.contains("mean_cropout_ssim"));
    REQUIRE(agg.at("skipped").size() == 2);
    for (const auto& s : agg.at("skipped")) {
        CHECK(s.contains("name"));
        CHECK(s.contains("reason"));
    }
}

TEST_CASE("evaluate computes cropout scores when masks are supplied") {
    TempDir dir("cli-eval-mask");
    const auto clean = dir.path / "clean";
    write_clean_set(clean, 2);
    const auto data = dir.path / "data";
    REQUIRE(run_cli("generate \"" + clean.string() + "\" --out \"" + data.string() +
                    "\" --seed 3") == 0);

    const auto report = dir.path / "report.jsonl";
    CHECK(run_cli("evaluate \"" + (data / "defected").string() + "\" \"" + clean.string() +
                  "\" --mask-dir \"" + (data / "masks").string() + "\" --out \"" +
                  report.string() + "\"") == 0);
    const auto rows = read_report(report);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(rows[i].at("cropout_ssim").is_number());
        CHECK(rows[i].at("cropout_ssim").get<double>() < 1.0);
        CHECK(rows[i].at("psnr_db").is_number());
    }
    const json agg = rows.back().at("aggregate");
    CHECK(agg.at("mean_cropout_ssim").is_number());
    CHECK(agg.at("pairs") == 2);
}

TEST_CASE("evaluate fails cleanly when no pair can be scored") {
    TempDir dir("cli-eval-none");
    const auto a = dir.path / "a";
    const auto b = dir.path / "b";
    std::filesystem::create_directories(a);
    std::filesystem::create_directories(b);
    save_image(testutil::smooth_image(1, 64, 64), a / "x.png", 8);
    save_image(testutil::smooth_image(2, 64, 64), b / "y.png", 8);
    const auto report = dir.path / "report.jsonl";
    CHECK(run_cli("evaluate \"" + a.string() + "\" \"" + b.string() + "\" --out \"" +
                  report.string() + "\"") == 3);
    // the report still records why everything was skipped
    const auto rows = read_report(report);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("aggregate").at("pairs") == 0);
    CHECK(rows[0].at("aggregate").at("skipped").size() == 2);
}

TEST_CASE("loss subcommand prints the report and validates w") {
    TempDir dir("cli-loss");
    const auto img = dir.path / "img.png";
    save_image(testutil::smooth_image(12, 64, 64), img, 8);

    const auto outfile = dir.path / "stdout.json";
    CHECK(run_cli("loss \"" + img.string() + "\" \"" + img.string() + "\" \"" + img.string() +
                      "\" --w 0.5",
                  " >\"" + outfile.string() + "\" 2>/dev/null") == 0);
    const json report = json::parse(testutil::slurp(outfile));
    CHECK(report.at("spatial").get<double>() == 0.0);
    CHECK(report.at("frequency").get<double>() == 0.0);
    CHECK(report.at("combined").get<double>() == 0.0);
    CHECK(report.at("frequency_weight").get<double>() == 0.1);
    CHECK(report.at("w").get<double>() == 0.5);
    CHECK(report.at("t").get<double>() == 0.1);

    CHECK(run_cli("loss \"" + img.string() + "\" \"" + img.string() + "\" \"" + img.string() +
                  "\" --w 0.3") == 2);
}

TEST_CASE("baseline subcommand restores a generated pair in place") {
    TempDir dir("cli-base");
    const auto clean = dir.path / "clean";
    write_clean_set(clean, 1);
    const auto data = dir.path / "data";
    REQUIRE(run_cli("generate \"" + clean.string() + "\" --out \"" + data.string() +
                    "\" --seed 5") == 0);

    const auto defected_p = data / "defected" / "plate_00.png";
    const auto mask_p = data / "masks" / "plate_00.png";
    const auto out_p = dir.path / "restored.png";
    CHECK(run_cli("baseline \"" + defected_p.string() + "\" \"" + mask_p.string() +
                  "\" --out \"" + out_p.string() + "\"") == 0);

    const RasterImage defected = load_image(defected_p);
    const GrayField mask = load_mask_png(mask_p);
    const RasterImage restored = load_image(out_p);
    bool touched = false;
    for (int y = 0; y < restored.height(); ++y) {
        for (int x = 0; x < restored.width(); ++x) {
            for (Channel c : kChannels) {
                if (mask.at(x, y) <= 0.5f) {
                    CHECK(restored.at(c, x, y) == defected.at(c, x, y));
                } else {
                    touched = touched || restored.at(c, x, y) != defected.at(c, x, y);
                }
            }
        }
    }
    CHECK(touched);

    // an empty mask is a data error
    GrayField empty(defected.width(), defected.height(), 0.0f);
    const auto empty_p = dir.path / "empty.png";
    save_mask_png(empty, empty_p);
    CHECK(run_cli("baseline \"" + defected_p.string() + "\" \"" + empty_p.string() +
                  "\" --out \"" + (dir.path / "r2.png").string() + "\"") == 3);
}

TEST_CASE("top-level usage errors exit with code 2, help with 0") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("no-such-command") == 2);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("generate --help") == 0);
}
