#pragma once

#include <span>
#include <vector>

#include "elldet/arc_segments.hpp"

namespace elldet {

/// Chain of arc-support LSs in tail..seed..head order. Direction angles
/// increase along the chain.
struct ArcSupportGroup {
    std::vector<int> members;       // indices into the segment list
    int polarity = 0;
    Point2 start;                   // start of the first member
    Point2 end;                     // end of the last member
    std::vector<double> intervals;  // degrees between consecutive members
    double spanning_angle = 0.0;
    double saliency = 0.0;

    Point2 midpoint() const { return (start + end) * 0.5; }
};

/// min(1, sum(intervals) / 360)
double group_saliency(std::span<const double> intervals);

/// Fills endpoints, intervals and saliency for an ordered member list.
ArcSupportGroup make_group(std::vector<int> members, std::span<const ArcSupportLS> segments);

struct GroupingParams {
    double alpha = 22.5;
    double window_side = 16.0;   // statistical area side, pixels
    double window_offset = 1.0;  // distance of the window center past the terminal
};

/// Links segments into groups. A candidate must share polarity, turn the same
/// way by less than 2 alpha, have its facing terminal within half a window side
/// of the current terminal, and collect the most region votes in the window. `region_label` maps each pixel of a
/// width x height grid to the region id of its segment (or -1). Every segment
/// ends up in exactly one group.
std::vector<ArcSupportGroup> link_groups(std::span<const ArcSupportLS> segments, std::span<const int> region_label,
                                         int width, int height, const GroupingParams& params);

}  // namespace elldet
