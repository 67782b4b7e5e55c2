#include "elldet/arc_segments.hpp"

#include <algorithm>
#include <cmath>

#include "elldet/error.hpp"

namespace elldet {

namespace {

constexpr int kMagnitudeBins = 1024;

// Pixels of `pixels` whose level-line angle deviates from the running mean by
// less than `tol` are absorbed; the mean is updated after every addition.
void grow_from(PixelCoord seed, const GradientMap& g, double tol, std::vector<std::uint8_t>& used,
               std::vector<PixelCoord>& out) {
    out.clear();
    out.push_back(seed);
    used[g.index(seed.x, seed.y)] = 1;
    double ang = g.level_line_angle[g.index(seed.x, seed.y)];
    double sx = std::cos(deg2rad(ang)), sy = std::sin(deg2rad(ang));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const PixelCoord p = out[i];
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int x = p.x + dx, y = p.y + dy;
                if (!g.is_valid(x, y)) continue;
                const std::size_t k = g.index(x, y);
                if (used[k]) continue;
                const double la = g.level_line_angle[k];
                if (!(abs_angle_diff(la, ang) < tol)) continue;
                used[k] = 1;
                out.push_back({x, y});
                sx += std::cos(deg2rad(la));
                sy += std::sin(deg2rad(la));
                ang = wrap_angle(rad2deg(std::atan2(sy, sx)));
            }
    }
}

void release(const std::vector<PixelCoord>& pixels, const GradientMap& g, std::vector<std::uint8_t>& used) {
    for (const auto& p : pixels) used[g.index(p.x, p.y)] = 0;
}

}  // namespace

double region_main_angle(std::span<const PixelCoord> pixels, const GradientMap& gmap) {
    if (pixels.empty()) throw Error(ErrorCode::EmptyRegion, "region has no pixels");
    double s = 0.0, c = 0.0;
    for (const auto& p : pixels) {
        const double t = deg2rad(gmap.level_line_angle[gmap.index(p.x, p.y)]);
        s += std::sin(t);
        c += std::cos(t);
    }
    return wrap_angle(rad2deg(std::atan2(s, c)));
}

SupportRegion describe_region(std::vector<PixelCoord> pixels, const GradientMap& gmap) {
    if (pixels.empty()) throw Error(ErrorCode::EmptyRegion, "region has no pixels");
    SupportRegion r;
    r.pixels = std::move(pixels);
    r.main_angle_ab = region_main_angle(r.pixels, gmap);

    double wsum = 0.0;
    Point2 c{};
    for (const auto& p : r.pixels) {
        const double w = gmap.magnitude[gmap.index(p.x, p.y)];
        c += Point2{double(p.x), double(p.y)} * w;
        wsum += w;
    }
    if (!(wsum > 0.0)) {
        c = {};
        for (const auto& p : r.pixels) c += Point2{double(p.x), double(p.y)};
        c = c / double(r.pixels.size());
        wsum = 0.0;
    } else {
        c = c / wsum;
    }
    r.c = c;

    double cxx = 0.0, cyy = 0.0, cxy = 0.0;
    for (const auto& p : r.pixels) {
        const double w = wsum > 0.0 ? gmap.magnitude[gmap.index(p.x, p.y)] : 1.0;
        const double dx = p.x - c.x, dy = p.y - c.y;
        cxx += w * dx * dx;
        cyy += w * dy * dy;
        cxy += w * dx * dy;
    }
    const Point2 main_dir = unit_from_angle(r.main_angle_ab);
    Point2 axis = main_dir;
    const double half_diff = 0.5 * (cxx - cyy);
    const double rad = std::hypot(half_diff, cxy);
    if (rad > 1e-9 * (cxx + cyy)) {
        const double t = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
        axis = {std::cos(t), std::sin(t)};
        if (dot(axis, main_dir) < 0.0) axis = axis * -1.0;
    }

    double lmin = 0.0, lmax = 0.0, wmin = 0.0, wmax = 0.0;
    const Point2 perp = rotate_plus90(axis);
    for (const auto& p : r.pixels) {
        const Point2 d = Point2{double(p.x), double(p.y)} - c;
        const double l = dot(d, axis), w = dot(d, perp);
        lmin = std::min(lmin, l);
        lmax = std::max(lmax, l);
        wmin = std::min(wmin, w);
        wmax = std::max(wmax, w);
    }
    r.a = c + axis * lmin;
    r.b = c + axis * lmax;
    r.length = lmax - lmin;
    r.width = std::max(1.0, wmax - wmin);
    r.density = double(r.pixels.size()) / (std::max(1.0, r.length) * r.width);

    std::vector<PixelCoord> side_a, side_b;
    for (const auto& p : r.pixels) {
        const Point2 d = Point2{double(p.x), double(p.y)} - c;
        (dot(d, axis) < 0.0 ? side_a : side_b).push_back(p);
    }
    r.sub_angle_ac = side_a.empty() ? r.main_angle_ab : region_main_angle(side_a, gmap);
    r.sub_angle_cb = side_b.empty() ? r.main_angle_ab : region_main_angle(side_b, gmap);
    return r;
}

std::vector<SupportRegion> grow_regions(const GradientMap& g, const RegionGrowParams& params) {
    std::vector<SupportRegion> regions;
    const std::size_t n = g.valid.size();
    double max_mag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (g.valid[i]) max_mag = std::max(max_mag, g.magnitude[i]);
    if (!(max_mag > 0.0)) return regions;

    // Counting sort into magnitude bins, raster order inside a bin.
    std::vector<int> bin_of(n, -1);
    std::vector<std::size_t> bin_count(kMagnitudeBins + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.valid[i]) continue;
        const int b = std::min(kMagnitudeBins - 1, int(g.magnitude[i] / max_mag * kMagnitudeBins));
        bin_of[i] = b;
        ++bin_count[kMagnitudeBins - 1 - b + 1];
    }
    for (int b = 1; b <= kMagnitudeBins; ++b) bin_count[b] += bin_count[b - 1];
    std::vector<std::size_t> order(bin_count[kMagnitudeBins]);
    for (std::size_t i = 0; i < n; ++i)
        if (bin_of[i] >= 0) order[bin_count[kMagnitudeBins - 1 - bin_of[i]]++] = i;

    std::vector<std::uint8_t> used(n, 0);
    std::vector<PixelCoord> pix;
    for (std::size_t idx : order) {
        if (used[idx]) continue;
        const PixelCoord seed{int(idx % g.width), int(idx / g.width)};
        grow_from(seed, g, params.alpha, used, pix);
        if (int(pix.size()) < params.min_pixels) continue;

        SupportRegion r = describe_region(pix, g);
        if (r.density < params.density) {
            release(pix, g, used);
            grow_from(seed, g, 0.5 * params.alpha, used, pix);
            if (int(pix.size()) < params.min_pixels) continue;
            r = describe_region(pix, g);
        }
        if (r.density < params.density) {
            // Shed pixels far from the seed until the rectangle is dense enough.
            const Point2 sc{double(seed.x), double(seed.y)};
            double radius = std::max(distance(sc, r.a), distance(sc, r.b));
            while (r.density < params.density && int(r.pixels.size()) >= params.min_pixels) {
                radius *= 0.75;
                std::vector<PixelCoord> keep;
                keep.reserve(r.pixels.size());
                for (const auto& p : r.pixels) {
                    if (distance(sc, {double(p.x), double(p.y)}) > radius)
                        used[g.index(p.x, p.y)] = 0;
                    else
                        keep.push_back(p);
                }
                if (keep.empty()) break;
                r = describe_region(std::move(keep), g);
            }
        }
        if (int(r.pixels.size()) < params.min_pixels || r.density < params.density) continue;
        regions.push_back(std::move(r));
    }
    return regions;
}

std::optional<ArcSupportLS> classify_region(const SupportRegion& r, double t_ai, int region_id) {
    if (r.a == r.b || !(r.length > 0.0)) throw Error(ErrorCode::DegenerateRegion, "rectangle terminals coincide");
    const double d1 = signed_angle_diff(r.main_angle_ab, r.sub_angle_ac);
    const double d2 = signed_angle_diff(r.sub_angle_cb, r.main_angle_ab);
    int sense = 0;
    if (d1 >= t_ai && d2 >= t_ai) sense = 1;
    else if (d1 <= -t_ai && d2 <= -t_ai) sense = -1;
    if (sense == 0) return std::nullopt;

    ArcSupportLS ls;
    ls.start = sense > 0 ? r.a : r.b;
    ls.end = sense > 0 ? r.b : r.a;
    ls.length = distance(ls.start, ls.end);
    ls.direction_angle = angle_of(ls.end - ls.start);
    ls.arc_direction = rotate_plus90(normalized(ls.end - ls.start));
    // Level lines turning toward +90 means the gradient, and so the brighter
    // side, points at the concave side.
    ls.polarity = sense;
    ls.region_id = region_id;
    return ls;
}

ArcExtraction extract_arc_support_ls(const GrayImage& img, const Config& cfg) {
    if (img.width < kMinImageSide || img.height < kMinImageSide)
        throw Error(ErrorCode::TooSmall, "image must be at least 8x8");
    ArcExtraction out;
    out.scale = cfg.scale;
    out.input_width = img.width;
    out.input_height = img.height;
    out.gradient = compute_gradient_map(gaussian_downscale(img, cfg.scale), cfg.quant_threshold);
    const GradientMap& g = out.gradient;
    out.region_label.assign(g.valid.size(), -1);

    const auto regions = grow_regions(g, {cfg.alpha, cfg.region_density, cfg.min_region_pixels});
    for (const auto& r : regions) {
        if (r.a == r.b || !(r.length > 0.0)) continue;
        auto ls = classify_region(r, cfg.t_ai, int(out.regions.size()));
        if (!ls || ls->length < cfg.min_ls_length) continue;
        for (const auto& p : r.pixels) out.region_label[g.index(p.x, p.y)] = ls->region_id;
        out.regions.push_back(r);
        out.segments.push_back(*ls);
    }
    return out;
}

}  // namespace elldet
