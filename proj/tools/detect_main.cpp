// detect <image> [options]: runs the ellipse detector and prints the detections.
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "elldet/detector.hpp"
#include "elldet/error.hpp"
#include "elldet/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Detect ellipses in a grayscale PGM or PNG image."};
    std::string image, format = "json", overlay_path, dump_dir, polarity = "all";
    elldet::Config cfg;
    bool seedless = false;
    app.add_option("image", image, "input image (P2/P5 graymap or 8-bit PNG)")->required();
    app.add_option("--tr", cfg.t_r, "support inlier ratio threshold")->check(CLI::Range(0.0, 10.0));
    app.add_option("--tac", cfg.t_ac, "angular coverage threshold in degrees")->check(CLI::Range(0.0, 360.0));
    app.add_option("--polarity", polarity, "all, positive or negative")
        ->check(CLI::IsMember({"all", "positive", "negative"}));
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--overlay", overlay_path, "write the input with detections drawn (.png or .ppm)");
    app.add_option("--dump-stages", dump_dir, "write per-stage debug files into this directory");
    app.add_option("--scale", cfg.scale, "Gaussian downscale factor in (0, 1]")->check(CLI::Range(1e-3, 1.0));
    app.add_flag("--seedless", seedless, "accepted for compatibility; has no effect");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "detect: " << e.what() << "\n";
        return 2;
    }
    cfg.polarity_mode = elldet::parse_polarity_mode(polarity);

    try {
        const elldet::GrayImage img = elldet::load_grayscale(image);
        const elldet::DetectionTrace tr = elldet::detect_traced(img, cfg);
        const auto& dets = tr.result.detections;
        std::cout << (format == "csv" ? elldet::detections_csv(dets) : elldet::detections_json(dets));
        if (!overlay_path.empty()) elldet::save_rgb(elldet::overlay(img, dets), overlay_path);
        if (!dump_dir.empty()) elldet::dump_stages(tr, dump_dir);
    } catch (const elldet::Error& e) {
        std::cerr << "detect: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
