#include "elldet/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace elldet {

double group_saliency(std::span<const double> intervals) {
    const double sum = std::accumulate(intervals.begin(), intervals.end(), 0.0);
    return std::clamp(sum / 360.0, 0.0, 1.0);
}

ArcSupportGroup make_group(std::vector<int> members, std::span<const ArcSupportLS> segments) {
    ArcSupportGroup g;
    g.members = std::move(members);
    if (g.members.empty()) return g;
    const auto& first = segments[g.members.front()];
    const auto& last = segments[g.members.back()];
    g.polarity = first.polarity;
    g.start = first.start;
    g.end = last.end;
    for (std::size_t i = 1; i < g.members.size(); ++i) {
        const double d = signed_angle_diff(segments[g.members[i]].direction_angle,
                                           segments[g.members[i - 1]].direction_angle);
        g.intervals.push_back(d);
    }
    g.spanning_angle = std::accumulate(g.intervals.begin(), g.intervals.end(), 0.0);
    g.saliency = group_saliency(g.intervals);
    return g;
}

namespace {

struct Linker {
    std::span<const ArcSupportLS> segs;
    std::span<const int> label;
    int width, height;
    const GroupingParams& params;
    std::vector<int> seg_of_region;
    std::vector<std::uint8_t> used;
    std::vector<int> votes;

    // Best next segment past the head (forward) or tail (!forward) of `cur`, or -1.
    int next(int cur, bool forward) {
        const ArcSupportLS& s = segs[cur];
        const Point2 u = normalized(s.end - s.start);
        const Point2 center = forward ? s.end + u * params.window_offset : s.start - u * params.window_offset;
        const Point2 terminal = forward ? s.end : s.start;
        const double half = 0.5 * params.window_side;
        const int x0 = std::max(0, int(std::ceil(center.x - half)));
        const int x1 = std::min(width - 1, int(std::floor(center.x + half)));
        const int y0 = std::max(0, int(std::ceil(center.y - half)));
        const int y1 = std::min(height - 1, int(std::floor(center.y + half)));

        std::vector<int> touched;
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const int r = label[std::size_t(y) * width + x];
                if (r < 0 || r >= int(seg_of_region.size())) continue;
                const int k = seg_of_region[r];
                if (k < 0 || used[k] || k == cur) continue;
                if (votes[k]++ == 0) touched.push_back(k);
            }

        int best = -1, best_votes = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (int k : touched) {
            const ArcSupportLS& c = segs[k];
            const int v = votes[k];
            votes[k] = 0;
            if (c.polarity != s.polarity) continue;
            const double d = forward ? signed_angle_diff(c.direction_angle, s.direction_angle)
                                     : signed_angle_diff(s.direction_angle, c.direction_angle);
            if (!(d > 0.0 && d < 2.0 * params.alpha)) continue;
            // Continuity: the facing terminals must be close, not just the regions.
            const double gap = distance(terminal, forward ? c.start : c.end);
            if (gap > half) continue;
            if (v > best_votes || (v == best_votes && (gap < best_gap || (gap == best_gap && k < best)))) {
                best = k;
                best_votes = v;
                best_gap = gap;
            }
        }
        return best;
    }
};

}  // namespace

std::vector<ArcSupportGroup> link_groups(std::span<const ArcSupportLS> segments, std::span<const int> region_label,
                                         int width, int height, const GroupingParams& params) {
    Linker L{segments, region_label, width, height, params, {}, {}, {}};
    int max_region = -1;
    for (const auto& s : segments) max_region = std::max(max_region, s.region_id);
    L.seg_of_region.assign(std::size_t(max_region + 1), -1);
    for (std::size_t i = 0; i < segments.size(); ++i)
        if (segments[i].region_id >= 0) L.seg_of_region[segments[i].region_id] = int(i);
    L.used.assign(segments.size(), 0);
    L.votes.assign(segments.size(), 0);

    std::vector<int> order(segments.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return segments[a].length > segments[b].length; });

    std::vector<ArcSupportGroup> groups;
    for (int seed : order) {
        if (L.used[seed]) continue;
        L.used[seed] = 1;
        std::vector<int> head, tail;
        for (int cur = seed, k; (k = L.next(cur, true)) >= 0; cur = k) {
            L.used[k] = 1;
            head.push_back(k);
        }
        for (int cur = seed, k; (k = L.next(cur, false)) >= 0; cur = k) {
            L.used[k] = 1;
            tail.push_back(k);
        }
        std::vector<int> chain(tail.rbegin(), tail.rend());
        chain.push_back(seed);
        chain.insert(chain.end(), head.begin(), head.end());
        groups.push_back(make_group(std::move(chain), segments));
    }
    return groups;
}

}  // namespace elldet
