#include "elldet/verify.hpp"

#include <algorithm>
#include <cmath>

#include "elldet/error.hpp"

namespace elldet {

namespace {

std::vector<Point2> to_points(const std::vector<PixelCoord>& px) {
    std::vector<Point2> out;
    out.reserve(px.size());
    for (const auto& p : px) out.push_back({double(p.x), double(p.y)});
    return out;
}

bool usable(const EllipseGeom& e, const GradientMap& gmap) {
    const double diag = std::hypot(double(gmap.width), double(gmap.height));
    return std::isfinite(e.a) && std::isfinite(e.b) && std::isfinite(e.center.x) && std::isfinite(e.center.y) &&
           e.b >= 1.0 && e.a <= diag;
}

// Sign that makes -pol * gradient agree with the outward normal for most inliers.
int dominant_polarity(const EllipseGeom& e, const std::vector<PixelCoord>& px, const GradientMap& gmap) {
    double s = 0.0;
    for (const auto& p : px) {
        const std::size_t k = gmap.index(p.x, p.y);
        const Point2 n = ellipse_normal({double(p.x), double(p.y)}, e);
        s += dot(n, Point2{gmap.gx[k], gmap.gy[k]}) > 0.0 ? -1.0 : 1.0;
    }
    return s > 0.0 ? 1 : (s < 0.0 ? -1 : 0);
}

// Inliers on the thinned edge; the full band biases small eccentric fits inward.
std::vector<Point2> fit_points(const std::vector<PixelCoord>& px, const GradientMap& gmap) {
    std::vector<Point2> pts;
    for (const auto& p : px)
        if (gmap.edge[gmap.index(p.x, p.y)]) pts.push_back({double(p.x), double(p.y)});
    return pts.size() >= 5 ? pts : to_points(px);
}

struct Measure {
    std::vector<PixelCoord> inliers;
    double coverage = 0.0;
    bool admitted = false;
};

Measure measure(const EllipseGeom& e, const GradientMap& gmap, const Config& cfg,
                std::span<const std::uint8_t> claimed) {
    Measure m;
    m.inliers = collect_support_inliers(e, gmap, cfg.epsilon, cfg.alpha, claimed);
    m.coverage = angular_coverage(to_points(m.inliers), e, cfg.coverage_bin, cfg.coverage_min_run);
    m.admitted = double(m.inliers.size()) >= cfg.t_r * perimeter_approx(e) && m.coverage >= cfg.t_ac;
    return m;
}

}  // namespace

std::vector<PixelCoord> collect_support_inliers(const EllipseGeom& e, const GradientMap& gmap, double dist_tol,
                                                double alpha_deg, std::span<const std::uint8_t> claimed) {
    std::vector<PixelCoord> out;
    if (!usable(e, gmap)) return out;
    const int h = int(std::ceil(dist_tol + 1.0));

    // Union of (2h+1)-square windows around boundary samples, kept as merged
    // x-spans per row. Consecutive samples overlap, so rows hold few spans.
    using Span = std::pair<int, int>;
    std::vector<std::vector<Span>> rows(gmap.height);
    for (const Point2& s : sample_boundary(e, 0.5)) {
        const int cx = int(std::lround(s.x)), cy = int(std::lround(s.y));
        const int x0 = std::max(0, cx - h), x1 = std::min(gmap.width - 1, cx + h);
        if (x0 > x1) continue;
        for (int y = std::max(0, cy - h); y <= std::min(gmap.height - 1, cy + h); ++y) {
            auto& r = rows[y];
            if (!r.empty() && x0 <= r.back().second + 1 && x1 >= r.back().first - 1) {
                r.back().first = std::min(r.back().first, x0);
                r.back().second = std::max(r.back().second, x1);
            } else {
                r.push_back({x0, x1});
            }
        }
    }
    for (int y = 0; y < gmap.height; ++y) {
        auto& r = rows[y];
        if (r.empty()) continue;
        std::sort(r.begin(), r.end());
        int next = r.front().first;
        for (const auto& [lo, hi] : r) {
            for (int x = std::max(lo, next); x <= hi; ++x) {
                const std::size_t k = gmap.index(x, y);
                if (!claimed.empty() && claimed[k]) continue;
                if (is_support_inlier({x, y}, e, e.polarity, gmap, dist_tol, alpha_deg)) out.push_back({x, y});
            }
            next = std::max(next, hi + 1);
        }
    }
    return out;
}

double angular_coverage(std::span<const Point2> points, const EllipseGeom& e, double bin_deg, int min_run) {
    const int nbins = std::max(1, int(std::lround(360.0 / bin_deg)));
    std::vector<std::uint8_t> hit(nbins, 0);
    for (const Point2& p : points) {
        const double t = parametric_angle(p, e);
        const double tr = deg2rad(t);
        const double speed = std::hypot(e.a * std::sin(tr), e.b * std::cos(tr));
        const double half = 0.5 * rad2deg(1.0 / std::max(speed, 1e-9));
        const double lo = (t - half) / bin_deg, hi = (t + half) / bin_deg;
        const int b0 = int(std::floor(lo)), b1 = int(std::floor(hi));
        for (int b = b0; b <= b1 && b - b0 < nbins; ++b) hit[((b % nbins) + nbins) % nbins] = 1;
    }
    int total_hit = 0;
    for (auto v : hit) total_hit += v;
    if (total_hit == nbins) return 360.0;
    if (total_hit == 0) return 0.0;

    // Walk runs starting just after an empty bin so wrapped runs stay whole.
    int start = 0;
    while (hit[start]) ++start;
    int counted = 0, run = 0;
    for (int i = 1; i <= nbins; ++i) {
        const int b = (start + i) % nbins;
        if (hit[b]) {
            ++run;
        } else {
            if (run >= min_run) counted += run;
            run = 0;
        }
    }
    if (run >= min_run) counted += run;
    return counted * bin_deg;
}

double goodness_value(double inlier_count, double perimeter, double coverage_deg) {
    if (!(perimeter > 0.0)) return 0.0;
    const double r = std::min(1.0, inlier_count / perimeter);
    return std::sqrt(std::max(0.0, r * std::clamp(coverage_deg, 0.0, 360.0) / 360.0));
}

double goodness(const EllipseGeom& e, const GradientMap& gmap, const Config& cfg, std::span<const std::uint8_t> claimed) {
    const auto px = collect_support_inliers(e, gmap, 0.5 * cfg.epsilon, cfg.alpha, claimed);
    const auto pts = to_points(px);
    return goodness_value(double(px.size()), perimeter_approx(e),
                          angular_coverage(pts, e, cfg.coverage_bin, cfg.coverage_min_run));
}

int goodness_bucket(double g, int buckets) {
    return std::clamp(int(std::floor(g * buckets)), 0, buckets - 1);
}

std::vector<Detection> verify_candidates(const CandidateSet& cands, const GradientMap& gmap, const Config& cfg) {
    const int nb = std::max(1, cfg.goodness_buckets);
    std::vector<std::vector<int>> buckets(nb);
    for (std::size_t i = 0; i < cands.candidates.size(); ++i) {
        const auto& e = cands.candidates[i];
        if (!usable(e, gmap)) continue;
        buckets[goodness_bucket(goodness(e, gmap, cfg), nb)].push_back(int(i));
    }

    std::vector<std::uint8_t> claimed(gmap.valid.size(), 0);
    std::vector<std::pair<int, Detection>> dets;
    for (int b = nb - 1; b >= 0; --b)
        for (int i : buckets[b]) {
            EllipseGeom e = cands.candidates[i];
            Measure m = measure(e, gmap, cfg, claimed);
            if (!m.admitted) continue;
            if (e.polarity == 0) e.polarity = dominant_polarity(e, m.inliers, gmap);

            try {
                EllipseGeom r = fit_ellipse(std::span<const Point2>(fit_points(m.inliers, gmap)));
                r.polarity = e.polarity;
                if (usable(r, gmap)) {
                    Measure mr = measure(r, gmap, cfg, claimed);
                    if (mr.admitted) {
                        e = r;
                        m = std::move(mr);
                    }
                }
            } catch (const Error&) {
            }

            Detection d;
            d.geom = e;
            d.inlier_count = int(m.inliers.size());
            d.coverage_deg = m.coverage;
            d.inlier_ratio = d.inlier_count / perimeter_approx(e);
            d.goodness = goodness(e, gmap, cfg, claimed);
            for (const auto& p : m.inliers) claimed[gmap.index(p.x, p.y)] = 1;
            dets.push_back({goodness_bucket(d.goodness, nb), d});
        }

    std::stable_sort(dets.begin(), dets.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<Detection> out;
    for (auto& [_, d] : dets) out.push_back(d);
    return out;
}

}  // namespace elldet
