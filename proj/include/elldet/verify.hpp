#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "elldet/cluster.hpp"
#include "elldet/config.hpp"

namespace elldet {

struct Detection {
    EllipseGeom geom;
    double goodness = 0.0;
    int inlier_count = 0;
    double coverage_deg = 0.0;
    double inlier_ratio = 0.0;  // inlier_count / perimeter_approx
};

/// Support inliers of e among valid pixels in the band around its boundary.
/// Pixels flagged in `claimed` (same grid as gmap, may be empty) are skipped.
std::vector<PixelCoord> collect_support_inliers(const EllipseGeom& e, const GradientMap& gmap, double dist_tol,
                                                double alpha_deg, std::span<const std::uint8_t> claimed = {});

/// Parametric-angle coverage: each point marks the bins under its one-pixel
/// arc footprint; only runs of at least `min_run` consecutive bins count.
double angular_coverage(std::span<const Point2> points, const EllipseGeom& e, double bin_deg = 2.0, int min_run = 2);

/// sqrt(min(1, count / B) * coverage / 360)
double goodness_value(double inlier_count, double perimeter, double coverage_deg);

/// Goodness with inliers collected at epsilon / 2.
double goodness(const EllipseGeom& e, const GradientMap& gmap, const Config& cfg,
                std::span<const std::uint8_t> claimed = {});

/// Bucket index of a goodness value among `buckets` equal bins of [0, 1].
int goodness_bucket(double g, int buckets);

std::vector<Detection> verify_candidates(const CandidateSet& cands, const GradientMap& gmap, const Config& cfg);

}  // namespace elldet
