#pragma once

#include <span>
#include <vector>

#include "elldet/arc_segments.hpp"
#include "elldet/config.hpp"
#include "elldet/ellipse_fit.hpp"
#include "elldet/grouping.hpp"

namespace elldet {

struct InitialEllipse {
    EllipseGeom geom;     // polarity set from the source groups
    int group_a = -1;
    int group_b = -1;     // -1 for the single-group branch
    int inlier_count = 0;

    bool paired() const { return group_b >= 0; }
};

/// Everything candidate generation reads from the extraction stage.
struct CandidateContext {
    std::span<const ArcSupportLS> segments;
    std::span<const SupportRegion> regions;
    const GradientMap* gmap = nullptr;
    Normalization norm;
};

/// Pixel p supports e when its Rosin distance is below `dist_tol` and the
/// outward normal agrees with -pol * gradient within `alpha`. pol == 0 accepts
/// either sign.
bool is_support_inlier(PixelCoord p, const EllipseGeom& e, int pol, const GradientMap& gmap, double dist_tol,
                       double alpha_deg);

bool polarity_compatible(const ArcSupportGroup& g1, const ArcSupportGroup& g2);

/// Both groups must lie in each other's valid region: three inequalities per
/// ordered pair, all strictly above rho_d.
bool region_restriction(const ArcSupportGroup& g1, const ArcSupportGroup& g2, std::span<const ArcSupportLS> segments,
                        double rho_d);

struct InlierCheck {
    bool passed = false;
    int count = 0;                // support inliers over all segments
    std::vector<Point2> inliers;  // the ones on the thinned edge, used for refitting
};

/// Every segment needs more support inliers among its own region pixels than
/// its length.
InlierCheck adaptive_inliers_check(const EllipseGeom& e, std::span<const int> segment_ids, const CandidateContext& ctx,
                                   double epsilon, double alpha_deg);

/// Endpoints of every member, accumulated under ctx.norm.
ScatterMatrix group_scatter(const ArcSupportGroup& g, const CandidateContext& ctx);

std::vector<InitialEllipse> fit_salient_groups(std::span<const ArcSupportGroup> groups, const CandidateContext& ctx,
                                               const Config& cfg);

/// Single-group branch plus every compatible pair, ordered by source ids.
std::vector<InitialEllipse> generate_initial_set(std::span<const ArcSupportGroup> groups, const CandidateContext& ctx,
                                                 const Config& cfg);

}  // namespace elldet
