#pragma once

#include <optional>
#include <span>
#include <vector>

#include "elldet/config.hpp"
#include "elldet/geometry.hpp"
#include "elldet/image.hpp"

namespace elldet {

/// Aligned pixel set plus its circumscribed rectangle. A and B are the axis
/// terminals with A -> B along the main angle; C is the magnitude-weighted centroid.
struct SupportRegion {
    std::vector<PixelCoord> pixels;
    Point2 a;
    Point2 b;
    Point2 c;
    double main_angle_ab = 0.0;
    double sub_angle_ac = 0.0;
    double sub_angle_cb = 0.0;
    double width = 1.0;
    double length = 0.0;
    double density = 0.0;
};

struct ArcSupportLS {
    Point2 start;
    Point2 end;
    double length = 0.0;
    double direction_angle = 0.0;  // angle of start -> end
    Point2 arc_direction;          // unit, toward the concave side
    int polarity = 0;              // +1 when the concave side is brighter
    int region_id = -1;

    Point2 midpoint() const { return (start + end) * 0.5; }
};

/// Circular mean of level-line angles, degrees [0, 360). Throws EmptyRegion.
double region_main_angle(std::span<const PixelCoord> pixels, const GradientMap& gmap);

/// Computes rectangle, centroid and the three angles for a pixel set.
/// Throws EmptyRegion for an empty set.
SupportRegion describe_region(std::vector<PixelCoord> pixels, const GradientMap& gmap);

struct RegionGrowParams {
    double alpha = 22.5;
    double density = 0.7;
    int min_pixels = 10;
};

/// Grows 8-connected aligned regions from seeds in pseudo-sorted descending
/// magnitude order. Regions below the density bound get one retry at half the
/// tolerance, then have pixels far from the seed shed until dense enough.
std::vector<SupportRegion> grow_regions(const GradientMap& gmap, const RegionGrowParams& params);

/// Arc-support LS when the sub-angles rotate monotonically by at least t_ai on
/// both sides; nullopt for a straight region. Throws DegenerateRegion when A == B.
/// Endpoints are ordered so that arc_direction == rotate_plus90(unit(end - start)).
std::optional<ArcSupportLS> classify_region(const SupportRegion& r, double t_ai, int region_id = -1);

struct ArcExtraction {
    std::vector<ArcSupportLS> segments;
    std::vector<SupportRegion> regions;  // indexed by ArcSupportLS::region_id
    std::vector<int> region_label;       // per gradient pixel, region id or -1
    GradientMap gradient;
    double scale = 1.0;
    int input_width = 0;
    int input_height = 0;

    /// Working-frame point to input-image coordinates.
    Point2 to_input(Point2 p) const { return (p + Point2{0.5, 0.5}) / scale; }
    Point2 from_input(Point2 p) const { return p * scale - Point2{0.5, 0.5}; }
};

ArcExtraction extract_arc_support_ls(const GrayImage& img, const Config& cfg);

}  // namespace elldet
