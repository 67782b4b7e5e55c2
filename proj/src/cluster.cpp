#include "elldet/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace elldet {

namespace {

using Vec = std::vector<double>;

double per_dim(std::span<const double> period, std::size_t d) { return d < period.size() ? period[d] : 0.0; }

double scaled_dist2(const Vec& a, const Vec& b, std::span<const double> bw, std::span<const double> period) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double p = per_dim(period, d);
        const double diff = p > 0.0 ? signed_angle_diff(a[d], b[d], p) : a[d] - b[d];
        const double z = diff / bw[d];
        s += z * z;
    }
    return s;
}

// Mean of the selected points; circular dims through their angle-scaled unit vectors.
Vec mean_of(const std::vector<Vec>& pts, const std::vector<int>& idx, std::span<const double> period) {
    const std::size_t dim = pts[idx.front()].size();
    Vec m(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
        const double p = per_dim(period, d);
        if (p > 0.0) {
            double s = 0.0, c = 0.0;
            for (int i : idx) {
                const double t = 2.0 * std::numbers::pi * pts[i][d] / p;
                s += std::sin(t);
                c += std::cos(t);
            }
            m[d] = wrap_angle(std::atan2(s, c) / (2.0 * std::numbers::pi) * p, p);
        } else {
            for (int i : idx) m[d] += pts[i][d];
            m[d] /= double(idx.size());
        }
    }
    return m;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MeanShiftResult mean_shift_modes(const std::vector<Vec>& points, std::span<const double> bandwidth, int max_iter,
                                 std::span<const double> period) {
    MeanShiftResult out;
    if (points.empty()) return out;

    std::vector<Vec> conv;
    conv.reserve(points.size());
    std::vector<int> window;
    for (const Vec& start : points) {
        Vec x = start;
        for (int it = 0; it < max_iter; ++it) {
            window.clear();
            for (std::size_t i = 0; i < points.size(); ++i)
                if (scaled_dist2(x, points[i], bandwidth, period) <= 1.0) window.push_back(int(i));
            if (window.empty()) break;
            Vec nx = mean_of(points, window, period);
            const double shift2 = scaled_dist2(nx, x, bandwidth, period);
            x = std::move(nx);
            if (shift2 < 1e-6) break;
        }
        conv.push_back(std::move(x));
    }

    // Converged positions within half a bandwidth share one mode.
    std::vector<std::vector<int>> groups;
    for (std::size_t i = 0; i < conv.size(); ++i) {
        bool placed = false;
        for (auto& g : groups)
            if (scaled_dist2(conv[i], conv[g.front()], bandwidth, period) <= 0.25) {
                g.push_back(int(i));
                placed = true;
                break;
            }
        if (!placed) groups.push_back({int(i)});
    }
    for (const auto& g : groups) out.modes.push_back(mean_of(conv, g, period));

    out.assignment.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        int best = 0;
        double bd = scaled_dist2(points[i], out.modes[0], bandwidth, period);
        for (std::size_t m = 1; m < out.modes.size(); ++m) {
            const double d = scaled_dist2(points[i], out.modes[m], bandwidth, period);
            if (d < bd) {
                bd = d;
                best = int(m);
            }
        }
        out.assignment[i] = best;
    }
    return out;
}

bool CandidateSet::count_identity() const {
    int sum = 0;
    for (const auto& per_k : n_axes) sum += std::accumulate(per_k.begin(), per_k.end(), 0);
    return sum == total && total == int(candidates.size()) && n_centers == int(n_orientations.size());
}

ClusterParams ClusterParams::from_config(const Config& cfg, int width, int height) {
    ClusterParams p;
    const double diag = std::hypot(double(width), double(height));
    p.center_bw = std::max(2.0 * cfg.epsilon, cfg.center_bw_diag_frac * diag);
    p.orientation_bw = cfg.orientation_bw;
    p.axes_bw_min = 2.0 * cfg.epsilon;
    p.axes_bw_frac = cfg.axes_bw_frac;
    p.max_iter = cfg.max_iter;
    p.circle_ratio = cfg.circle_ratio;
    return p;
}

namespace {

// The three stages over the initial ellipses listed in `idx`; appends to `out`.
void cluster_stages(std::span<const InitialEllipse> initial, const std::vector<int>& idx, const ClusterParams& params,
                    CandidateSet& out) {
    std::vector<Vec> centers;
    for (int i : idx) centers.push_back({initial[i].geom.center.x, initial[i].geom.center.y});
    const double cbw[2] = {params.center_bw, params.center_bw};
    const auto stage1 = mean_shift_modes(centers, cbw, params.max_iter);

    for (std::size_t m = 0; m < stage1.modes.size(); ++m) {
        std::vector<int> part;
        for (std::size_t j = 0; j < idx.size(); ++j)
            if (stage1.assignment[j] == int(m)) part.push_back(idx[j]);
        if (part.empty()) continue;
        const int k = out.n_centers++;
        out.n_orientations.push_back(0);
        out.n_axes.emplace_back();
        const Point2 center{stage1.modes[m][0], stage1.modes[m][1]};

        // Orientation stage over members with a defined orientation.
        std::vector<int> oriented, round;
        for (int i : part) {
            const auto& g = initial[i].geom;
            (g.b / g.a > params.circle_ratio ? round : oriented).push_back(i);
        }
        std::vector<std::vector<int>> subsets;
        std::vector<double> phis;
        if (oriented.empty()) {
            subsets.push_back(part);
            phis.push_back(0.0);
        } else {
            std::vector<Vec> ph;
            for (int i : oriented) ph.push_back({initial[i].geom.phi_deg});
            const double obw[1] = {params.orientation_bw};
            const double per[1] = {180.0};
            const auto stage2 = mean_shift_modes(ph, obw, params.max_iter, per);
            subsets.assign(stage2.modes.size(), {});
            for (const auto& m : stage2.modes) phis.push_back(m[0]);
            for (std::size_t j = 0; j < oriented.size(); ++j) subsets[stage2.assignment[j]].push_back(oriented[j]);
            std::size_t largest = 0;
            for (std::size_t s = 1; s < subsets.size(); ++s)
                if (subsets[s].size() > subsets[largest].size()) largest = s;
            subsets[largest].insert(subsets[largest].end(), round.begin(), round.end());
            std::sort(subsets[largest].begin(), subsets[largest].end());
            for (std::size_t s = subsets.size(); s-- > 0;)
                if (subsets[s].empty()) {
                    subsets.erase(subsets.begin() + std::ptrdiff_t(s));
                    phis.erase(phis.begin() + std::ptrdiff_t(s));
                }
        }
        out.n_orientations[k] = int(subsets.size());

        for (std::size_t s = 0; s < subsets.size(); ++s) {
            const auto& sub = subsets[s];
            std::vector<Vec> ax;
            std::vector<double> as;
            for (int i : sub) {
                ax.push_back({initial[i].geom.a, initial[i].geom.b});
                as.push_back(initial[i].geom.a);
            }
            const double bw = std::max(params.axes_bw_min, params.axes_bw_frac * median_of(as));
            const double abw[2] = {bw, bw};
            const auto stage3 = mean_shift_modes(ax, abw, params.max_iter);
            int emitted = 0;
            for (std::size_t t = 0; t < stage3.modes.size(); ++t) {
                std::vector<int> mem;
                int pol_sum = 0;
                for (std::size_t j = 0; j < sub.size(); ++j)
                    if (stage3.assignment[j] == int(t)) {
                        mem.push_back(sub[j]);
                        pol_sum += initial[sub[j]].geom.polarity;
                    }
                if (mem.empty()) continue;
                ++emitted;
                const int pol = pol_sum > 0 ? 1 : (pol_sum < 0 ? -1 : 0);
                out.candidates.push_back(
                    EllipseGeom::make(center, stage3.modes[t][0], stage3.modes[t][1], phis[s], pol));
                out.members.push_back(std::move(mem));
            }
            out.n_axes[k].push_back(emitted);
        }
    }
}

}  // namespace

CandidateSet hierarchical_cluster(std::span<const InitialEllipse> initial, const ClusterParams& params) {
    CandidateSet out;
    // One boundary has one polarity, so opposite polarities never share a cluster.
    for (int pol : {1, -1, 0}) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < initial.size(); ++i)
            if (initial[i].geom.polarity == pol) idx.push_back(int(i));
        if (!idx.empty()) cluster_stages(initial, idx, params, out);
    }
    out.total = int(out.candidates.size());
    return out;
}

}  // namespace elldet
