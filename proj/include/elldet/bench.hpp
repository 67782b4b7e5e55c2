#pragma once

#include <span>
#include <string>
#include <vector>

#include "elldet/config.hpp"
#include "elldet/ellipse_fit.hpp"
#include "elldet/image.hpp"

namespace elldet {

/// IoU of the two filled ellipses rasterized at pixel centers on a width x height grid.
double overlap_ratio(const EllipseGeom& e1, const EllipseGeom& e2, int width, int height);

struct EvalImage {
    std::string name;
    int width = 0;
    int height = 0;
    std::vector<EllipseGeom> detections;
    std::vector<EllipseGeom> truth;
};

struct ImageMatch {
    std::string name;
    std::vector<int> det_to_truth;   // -1 for false positives
    std::vector<double> overlap;     // overlap of each matched detection, 0 otherwise
    int tp = 0, fp = 0, fn = 0;
};

struct EvalReport {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    double mor = 0.0;
    double d0 = 0.8;
    int tp = 0, fp = 0, fn = 0;
    std::vector<ImageMatch> images;
};

/// Greedy one-to-one matching by descending overlap; a pair counts when its
/// overlap exceeds d0. Ties break on detection index, then truth index.
ImageMatch match_image(const EvalImage& img, double d0);

/// Micro-averaged over all images. Undefined ratios are reported as 0.
EvalReport evaluate(std::span<const EvalImage> images, double d0 = 0.8);

enum class Sweep { SizeRatio, OrientationRatio, CoverageRatio };

const char* to_string(Sweep s);
Sweep parse_sweep(const std::string& s);

struct SweepSpec {
    Sweep kind = Sweep::SizeRatio;
    int subsample = 10;   // keep the last entry of every run of this many along each axis; 1 = full grid
    bool invert = false;  // bright ellipse on dark ground
    int size = 250;
    double foreground = 40.0;
    double background = 220.0;
};

struct SyntheticItem {
    std::string name;
    EllipseGeom truth;
    double coverage_deg = 360.0;
};

std::vector<SyntheticItem> sweep_items(const SweepSpec& spec);
GrayImage render_item(const SyntheticItem& item, const SweepSpec& spec);

/// One row of the ground-truth CSV per ellipse.
void write_ground_truth(const std::string& path, std::span<const SyntheticItem> items);
std::vector<SyntheticItem> read_ground_truth(const std::string& path);

/// Writes <name>.pgm and <name>.csv per item into out_dir. Throws IoError.
std::vector<SyntheticItem> generate_synthetic(const SweepSpec& spec, const std::string& out_dir);

struct TimingSample {
    long pixels = 0;
    double ms = 0.0;
};

/// Least-squares slope of log(ms) against log(pixels). Needs at least four
/// distinct sizes spanning a 16x pixel-count range, else InsufficientSamples.
double loglog_slope(std::span<const TimingSample> samples);

struct TimingResult {
    std::vector<TimingSample> samples;
    double slope = 0.0;
};

/// Median of `repeats` detector runs per image, then the log-log slope.
TimingResult timing_sweep(std::span<const GrayImage> images, const Config& cfg, int repeats = 3);

/// Square scene of the given side: a few ellipses and bars scaled with the side.
GrayImage timing_scene(int side);

}  // namespace elldet
