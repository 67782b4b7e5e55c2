#include "elldet/candidates.hpp"

#include <algorithm>
#include <cmath>

#include "elldet/error.hpp"

namespace elldet {

bool is_support_inlier(PixelCoord p, const EllipseGeom& e, int pol, const GradientMap& gmap, double dist_tol,
                       double alpha_deg) {
    if (!gmap.is_valid(p.x, p.y)) return false;
    const Point2 q{double(p.x), double(p.y)};
    if (!(rosin_distance(q, e) < dist_tol)) return false;
    const Point2 l = to_local(q, e);
    if (l.x == 0.0 && l.y == 0.0) return false;
    const Point2 n = ellipse_normal(q, e);
    const std::size_t k = gmap.index(p.x, p.y);
    const double mag = gmap.magnitude[k];
    const double c = dot(n, Point2{gmap.gx[k], gmap.gy[k]}) / mag;
    const double limit = std::cos(deg2rad(alpha_deg));
    if (pol == 0) return std::abs(c) > limit;
    return -pol * c > limit;
}

bool polarity_compatible(const ArcSupportGroup& g1, const ArcSupportGroup& g2) { return g1.polarity == g2.polarity; }

namespace {

bool one_way(const ArcSupportGroup& gi, const ArcSupportGroup& gj, std::span<const ArcSupportLS> segs, double rho) {
    const auto& ls = segs[gi.members.front()];
    const auto& le = segs[gi.members.back()];
    if (!(dot(ls.arc_direction, gj.end - gi.start) > rho)) return false;
    if (!(dot(le.arc_direction, gj.start - gi.end) > rho)) return false;
    // With endpoints ordered so the concave side is at +90, -Pol * clockwise
    // rotation of the chord is this +90 rotation.
    const Point2 inward = rotate_plus90(normalized(gi.end - gi.start));
    return dot(inward, gj.midpoint() - gi.midpoint()) > rho;
}

std::size_t distinct_count(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    return std::size_t(std::unique(pts.begin(), pts.end()) - pts.begin());
}

std::vector<Point2> group_endpoints(const ArcSupportGroup& g, const CandidateContext& ctx) {
    std::vector<Point2> pts;
    for (int m : g.members) {
        pts.push_back(ctx.segments[m].start);
        pts.push_back(ctx.segments[m].end);
    }
    return pts;
}

// Fits the inlier set; falls back to `e` when the refit degenerates.
EllipseGeom refit(const EllipseGeom& e, const std::vector<Point2>& inliers, const Normalization& norm) {
    try {
        EllipseGeom r = fit_ellipse(accumulate_scatter(inliers, norm));
        r.polarity = e.polarity;
        return r;
    } catch (const Error&) {
        return e;
    }
}

}  // namespace

bool region_restriction(const ArcSupportGroup& g1, const ArcSupportGroup& g2, std::span<const ArcSupportLS> segments,
                        double rho_d) {
    if (g1.members.empty() || g2.members.empty()) return false;
    return one_way(g1, g2, segments, rho_d) && one_way(g2, g1, segments, rho_d);
}

InlierCheck adaptive_inliers_check(const EllipseGeom& e, std::span<const int> segment_ids, const CandidateContext& ctx,
                                   double epsilon, double alpha_deg) {
    InlierCheck out;
    out.passed = !segment_ids.empty();
    std::vector<Point2> all;
    for (int id : segment_ids) {
        const ArcSupportLS& s = ctx.segments[id];
        const SupportRegion& r = ctx.regions[s.region_id];
        int count = 0;
        for (const PixelCoord& p : r.pixels) {
            if (is_support_inlier(p, e, e.polarity, *ctx.gmap, epsilon, alpha_deg)) {
                ++count;
                all.push_back({double(p.x), double(p.y)});
                if (ctx.gmap->edge[ctx.gmap->index(p.x, p.y)]) out.inliers.push_back(all.back());
            }
        }
        if (!(count > s.length)) out.passed = false;
    }
    out.count = int(all.size());
    if (out.inliers.size() < 5) out.inliers = std::move(all);
    return out;
}

ScatterMatrix group_scatter(const ArcSupportGroup& g, const CandidateContext& ctx) {
    const auto pts = group_endpoints(g, ctx);
    return accumulate_scatter(pts, ctx.norm);
}

std::vector<InitialEllipse> fit_salient_groups(std::span<const ArcSupportGroup> groups, const CandidateContext& ctx,
                                               const Config& cfg) {
    std::vector<InitialEllipse> out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        if (g.saliency < cfg.t_ss) continue;
        const auto pts = group_endpoints(g, ctx);
        if (distinct_count(pts) < 5) continue;
        EllipseGeom e;
        try {
            e = fit_ellipse(accumulate_scatter(pts, ctx.norm));
        } catch (const Error&) {
            continue;
        }
        e.polarity = g.polarity;
        const auto check = adaptive_inliers_check(e, g.members, ctx, cfg.epsilon, cfg.alpha);
        if (!check.passed) continue;
        out.push_back({refit(e, check.inliers, ctx.norm), int(i), -1, check.count});
    }
    return out;
}

std::vector<InitialEllipse> generate_initial_set(std::span<const ArcSupportGroup> groups, const CandidateContext& ctx,
                                                 const Config& cfg) {
    std::vector<InitialEllipse> out = fit_salient_groups(groups, ctx, cfg);

    std::vector<ScatterMatrix> scatters;
    std::vector<std::size_t> distinct;
    scatters.reserve(groups.size());
    for (const auto& g : groups) {
        scatters.push_back(group_scatter(g, ctx));
        distinct.push_back(distinct_count(group_endpoints(g, ctx)));
    }

    std::vector<int> ids;
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const auto& g1 = groups[i];
            const auto& g2 = groups[j];
            if (!polarity_compatible(g1, g2)) continue;
            if (!region_restriction(g1, g2, ctx.segments, cfg.rho_d)) continue;
            if (distinct[i] + distinct[j] < 5) continue;
            ScatterMatrix s = scatters[i];
            s += scatters[j];
            EllipseGeom e;
            try {
                e = fit_ellipse(s);
            } catch (const Error&) {
                continue;
            }
            e.polarity = g1.polarity;
            ids.assign(g1.members.begin(), g1.members.end());
            ids.insert(ids.end(), g2.members.begin(), g2.members.end());
            const auto check = adaptive_inliers_check(e, ids, ctx, cfg.epsilon, cfg.alpha);
            if (!check.passed) continue;
            out.push_back({refit(e, check.inliers, ctx.norm), int(i), int(j), check.count});
        }

    std::stable_sort(out.begin(), out.end(), [](const InitialEllipse& a, const InitialEllipse& b) {
        return a.group_a != b.group_a ? a.group_a < b.group_a : a.group_b < b.group_b;
    });
    return out;
}

}  // namespace elldet
