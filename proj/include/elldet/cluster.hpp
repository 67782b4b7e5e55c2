#pragma once

#include <span>
#include <vector>

#include "elldet/candidates.hpp"

namespace elldet {

struct MeanShiftResult {
    std::vector<std::vector<double>> modes;
    std::vector<int> assignment;  // nearest mode per input point
};

/// Flat-kernel mean shift. Distances are scaled per dimension by `bandwidth`;
/// a dimension with period > 0 is circular (wrapped distance, circular mean).
MeanShiftResult mean_shift_modes(const std::vector<std::vector<double>>& points, std::span<const double> bandwidth,
                                 int max_iter, std::span<const double> period = {});

struct CandidateSet {
    std::vector<EllipseGeom> candidates;
    std::vector<std::vector<int>> members;  // initial-ellipse indices per candidate
    int n_centers = 0;
    std::vector<int> n_orientations;        // per center partition
    std::vector<std::vector<int>> n_axes;   // per center partition, per orientation subset
    int total = 0;

    /// Total equals the sum of the per-subset axis counts.
    bool count_identity() const;
};

struct ClusterParams {
    double center_bw = 4.0;
    double orientation_bw = 10.0;
    double axes_bw_min = 4.0;
    double axes_bw_frac = 0.04;
    int max_iter = 20;
    double circle_ratio = 0.95;

    /// Bandwidths for a working image of the given size.
    static ClusterParams from_config(const Config& cfg, int width, int height);
};

/// Clusters each polarity class on its own: centers, then orientation (period
/// 180, near-circles join the largest subset), then semi-axes.
CandidateSet hierarchical_cluster(std::span<const InitialEllipse> initial, const ClusterParams& params);

}  // namespace elldet
