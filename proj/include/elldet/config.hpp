#pragma once

#include <string>

namespace elldet {

enum class PolarityMode { All, Positive, Negative };

const char* to_string(PolarityMode m);
/// Accepts "all", "positive", "negative"; throws InvalidArgument otherwise.
PolarityMode parse_polarity_mode(const std::string& s);

/// Detector parameters. Pixel-valued entries are in the downscaled working frame.
struct Config {
    double t_ai = 2.25;          // minimum sub-angle interval of an arc-support LS, degrees
    double alpha = 22.5;         // angle tolerance, degrees
    double t_ss = 0.25;          // saliency needed by the single-group branch
    double epsilon = 2.0;        // distance tolerance, pixels
    double rho_d = -6.0;         // region restriction slack, pixels
    double t_r = 0.6;            // inlier ratio threshold
    double t_ac = 165.0;         // angular coverage threshold, degrees
    PolarityMode polarity_mode = PolarityMode::All;
    double scale = 0.8;
    double min_ls_length = 5.0;

    double quant_threshold = 5.226251859505506;  // 2 / sin(22.5 deg)
    double region_density = 0.7;
    int min_region_pixels = 10;

    // Grouping window: square of side 8 * epsilon, pushed 0.5 * epsilon past the terminal.
    double window_side_factor = 8.0;
    double window_offset_factor = 0.5;

    // Clustering.
    double center_bw_diag_frac = 0.005;
    double orientation_bw = 10.0;
    double axes_bw_frac = 0.04;
    int max_iter = 20;
    double circle_ratio = 0.95;

    // Verification.
    double coverage_bin = 2.0;
    int coverage_min_run = 2;
    int goodness_buckets = 100;
};

}  // namespace elldet
