#pragma once

#include <span>
#include <string>

#include "elldet/bench.hpp"
#include "elldet/detector.hpp"

namespace elldet {

/// JSON array of {cx, cy, a, b, phi_deg, polarity, goodness, inliers, coverage_deg}.
std::string detections_json(std::span<const Detection> dets);
/// Same columns with a header row, 6 decimals for real values.
std::string detections_csv(std::span<const Detection> dets);

/// Input image with every detection stroked at 1 px.
RgbImage overlay(const GrayImage& img, std::span<const Detection> dets, std::uint8_t r = 255, std::uint8_t g = 0,
                 std::uint8_t b = 0);

/// Writes ls.txt, groups.txt, initial.txt, candidates.txt and stats.json into dir
/// (working-frame coordinates). Throws IoError.
void dump_stages(const DetectionTrace& trace, const std::string& dir);

std::string stats_json(const PipelineStats& st);
std::string eval_report_json(const EvalReport& r);

}  // namespace elldet
