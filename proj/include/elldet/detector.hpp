#pragma once

#include <vector>

#include "elldet/arc_segments.hpp"
#include "elldet/cluster.hpp"
#include "elldet/config.hpp"
#include "elldet/grouping.hpp"
#include "elldet/verify.hpp"

namespace elldet {

struct PipelineStats {
    int n_ls = 0;
    int n_groups = 0;
    int n_init = 0;
    int n_candidates = 0;
    int n_detections = 0;
    bool count_identity = true;  // candidate counts add up across the three clustering stages
    double ms_extract = 0.0;
    double ms_group = 0.0;
    double ms_initial = 0.0;
    double ms_cluster = 0.0;
    double ms_verify = 0.0;
    double ms_total = 0.0;
};

struct DetectionResult {
    std::vector<Detection> detections;  // input-image coordinates
    PipelineStats stats;
};

/// Intermediate products of one run, in the working frame.
struct DetectionTrace {
    ArcExtraction extraction;
    std::vector<ArcSupportLS> segments;  // after the polarity filter
    std::vector<ArcSupportGroup> groups;
    std::vector<InitialEllipse> initial;
    CandidateSet candidates;
    std::vector<Detection> work_detections;
    DetectionResult result;
};

/// Working-frame ellipse to input coordinates for the given downscale factor.
EllipseGeom to_input_frame(const EllipseGeom& e, double scale);
EllipseGeom to_work_frame(const EllipseGeom& e, double scale);

DetectionResult detect(const GrayImage& img, const Config& cfg = {});
DetectionTrace detect_traced(const GrayImage& img, const Config& cfg = {});

}  // namespace elldet
