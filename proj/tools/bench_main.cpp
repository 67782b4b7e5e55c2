// bench generate | run | time: synthetic sweeps, scoring against ground truth, runtime scaling.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "elldet/bench.hpp"
#include "elldet/detector.hpp"
#include "elldet/error.hpp"
#include "elldet/report.hpp"

namespace fs = std::filesystem;
using namespace elldet;

namespace {

int run_generate(const std::string& sweep, const std::string& out, int subsample, bool invert, int size) {
    SweepSpec spec;
    spec.kind = parse_sweep(sweep);
    spec.subsample = subsample;
    spec.invert = invert;
    spec.size = size;
    const auto items = generate_synthetic(spec, out);
    std::printf("wrote %zu images to %s\n", items.size(), out.c_str());
    return 0;
}

int run_eval(const std::string& dir, const Config& cfg, double d0, const std::string& report_path) {
    std::vector<fs::path> files;
    for (const auto& ent : fs::directory_iterator(dir)) {
        const auto ext = ent.path().extension().string();
        if (ext == ".pgm" || ext == ".png") files.push_back(ent.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<EvalImage> evals;
    for (const auto& f : files) {
        const GrayImage img = load_grayscale(f.string());
        EvalImage e{f.stem().string(), img.width, img.height, {}, {}};
        for (const auto& d : detect(img, cfg).detections) e.detections.push_back(d.geom);
        auto gt = f;
        gt.replace_extension(".csv");
        if (fs::exists(gt))
            for (const auto& it : read_ground_truth(gt.string())) e.truth.push_back(it.truth);
        evals.push_back(std::move(e));
    }
    const EvalReport r = evaluate(evals, d0);
    const std::string json = eval_report_json(r);
    if (report_path.empty()) {
        std::cout << json;
    } else {
        std::ofstream(report_path) << json;
    }
    std::fprintf(stderr, "images %zu  P %.4f  R %.4f  F %.4f  MOR %.4f  (tp %d fp %d fn %d)\n", evals.size(),
                 r.precision, r.recall, r.f_measure, r.mor, r.tp, r.fp, r.fn);
    return 0;
}

int run_time(const std::vector<int>& sides, int repeats, const Config& cfg) {
    std::vector<GrayImage> imgs;
    for (int s : sides) imgs.push_back(timing_scene(s));
    const TimingResult t = timing_sweep(imgs, cfg, repeats);
    std::printf("pixels,ms\n");
    for (const auto& s : t.samples) std::printf("%ld,%.3f\n", s.pixels, s.ms);
    std::printf("slope %.4f\n", t.slope);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic benchmark for the ellipse detector."};
    app.require_subcommand(1);

    std::string sweep = "size_ratio", out = "synthetic";
    int subsample = 10, size = 250;
    bool invert = false;
    auto* gen = app.add_subcommand("generate", "write a synthetic sweep with ground truth");
    gen->add_option("--sweep", sweep, "size_ratio, orientation_ratio or coverage_ratio")
        ->check(CLI::IsMember({"size_ratio", "orientation_ratio", "coverage_ratio"}));
    gen->add_option("--out", out, "output directory");
    gen->add_option("--subsample", subsample, "keep every n-th grid value per axis (1 = full grid)")
        ->check(CLI::PositiveNumber);
    gen->add_option("--size", size, "image side in pixels")->check(CLI::Range(8, 4096));
    gen->add_flag("--invert", invert, "bright ellipse on dark ground");

    std::string dir, report;
    double d0 = 0.8;
    Config cfg;
    auto* run = app.add_subcommand("run", "detect on a directory of images and score against <stem>.csv");
    run->add_option("dir", dir, "image directory")->required();
    run->add_option("--d0", d0, "overlap threshold for a true positive")->check(CLI::Range(0.0, 1.0));
    run->add_option("--tr", cfg.t_r, "support inlier ratio threshold");
    run->add_option("--tac", cfg.t_ac, "angular coverage threshold in degrees");
    run->add_option("--report", report, "write the JSON report here instead of standard output");

    std::vector<int> sides{128, 256, 512, 1024};
    int repeats = 3;
    auto* tim = app.add_subcommand("time", "runtime against pixel count on a scaled synthetic scene");
    tim->add_option("--sides", sides, "image sides")->delimiter(',');
    tim->add_option("--repeats", repeats, "runs per size; the median is kept")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*gen) return run_generate(sweep, out, subsample, invert, size);
        if (*run) return run_eval(dir, cfg, d0, report);
        return run_time(sides, repeats, cfg);
    } catch (const Error& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return 1;
    }
}
