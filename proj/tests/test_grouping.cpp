#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "elldet/detector.hpp"
#include "elldet/grouping.hpp"
#include "scenes.hpp"

using namespace elldet;

namespace {

constexpr int kSide = 200;

// Chords of a circle about (100, 100), traversed with increasing angle so the
// arc direction faces the center. Region pixels lie within 0.7 px of each chord.
struct Layout {
    std::vector<ArcSupportLS> segs;
    std::vector<int> label = std::vector<int>(kSide * kSide, -1);

    void add(Point2 start, Point2 end, int polarity = 1) {
        ArcSupportLS s;
        s.start = start;
        s.end = end;
        s.length = distance(start, end);
        s.direction_angle = angle_of(end - start);
        s.arc_direction = rotate_plus90(normalized(end - start));
        s.polarity = polarity;
        s.region_id = int(segs.size());
        const Point2 u = normalized(end - start);
        for (int y = 0; y < kSide; ++y)
            for (int x = 0; x < kSide; ++x) {
                const Point2 d = Point2{double(x), double(y)} - start;
                const double t = dot(d, u);
                if (t < 0 || t > s.length || std::abs(cross(u, d)) > 0.7) continue;
                label[std::size_t(y) * kSide + x] = s.region_id;
            }
        segs.push_back(s);
    }

    void arc(double t0_deg, double t1_deg, int polarity = 1, double r = 60.0) {
        const Point2 c{100, 100};
        add(c + unit_from_angle(t0_deg) * r, c + unit_from_angle(t1_deg) * r, polarity);
    }

    std::vector<ArcSupportGroup> link() const { return link_groups(segs, label, kSide, kSide, GroupingParams{}); }
};

}  // namespace

TEST(Saliency, Examples) {
    EXPECT_DOUBLE_EQ(group_saliency(std::vector<double>{40, 40}), 80.0 / 360.0);
    EXPECT_DOUBLE_EQ(group_saliency(std::vector<double>{200, 200}), 1.0);
    EXPECT_DOUBLE_EQ(group_saliency(std::vector<double>{}), 0.0);
}

TEST(MakeGroup, EndpointsAndIntervals) {
    Layout L;
    L.arc(0, 40);
    L.arc(41, 81);
    const ArcSupportGroup g = make_group({0, 1}, L.segs);
    EXPECT_EQ(g.start, L.segs[0].start);
    EXPECT_EQ(g.end, L.segs[1].end);
    ASSERT_EQ(g.intervals.size(), 1u);
    EXPECT_NEAR(g.intervals[0], 41.0, 1e-9);
    EXPECT_NEAR(g.spanning_angle, 41.0, 1e-9);
    EXPECT_EQ(g.polarity, 1);
}

TEST(Link, ThreeFortyDegreeSectorsFormOneChain) {
    Layout L;
    L.arc(0, 40);
    L.arc(41, 81);
    L.arc(82, 122);
    const auto groups = L.link();
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].members, (std::vector<int>{0, 1, 2}));
    EXPECT_NEAR(groups[0].spanning_angle, 82.0, 1e-9);
    EXPECT_NEAR(groups[0].saliency, 82.0 / 360.0, 1e-9);
}

TEST(Link, ChainOrderIndependentOfSeed) {
    Layout L;
    L.arc(0, 30);
    L.arc(31, 81);  // longest, seeds the chain in the middle
    L.arc(82, 112);
    const auto groups = L.link();
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].members, (std::vector<int>{0, 1, 2}));
}

TEST(Link, FiftyDegreeTurnsNeverLink) {
    Layout L;
    L.arc(0, 50);
    L.arc(51, 101);
    L.arc(102, 152);
    const auto groups = L.link();
    EXPECT_EQ(groups.size(), 3u);
    for (const auto& g : groups) EXPECT_EQ(g.members.size(), 1u);
}

TEST(Link, SingletonGroup) {
    Layout L;
    L.arc(10, 50);
    const auto groups = L.link();
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].saliency, 0.0);
    EXPECT_TRUE(groups[0].intervals.empty());
}

TEST(Link, PolarityGate) {
    Layout L;
    L.arc(0, 40);
    L.arc(41, 81, -1);
    L.arc(82, 122);
    EXPECT_EQ(L.link().size(), 3u);
}

TEST(Link, DistantFacingTerminalIsRejected) {
    Layout near, far;
    near.arc(0, 40);
    near.arc(41, 81);
    const Point2 c{100, 100};
    const Point2 s = c + unit_from_angle(41) * 60.0, e = c + unit_from_angle(81) * 60.0;
    far.arc(0, 40);
    far.add(s - normalized(e - s) * 20.0, e);  // region still crosses the window, start 20 px back
    EXPECT_EQ(near.link().size(), 1u);
    EXPECT_EQ(far.link().size(), 2u);
}

TEST(Link, ConvexChainsOnRealScene) {
    const auto scene = scenes::two_ellipses_with_bars();
    const DetectionTrace tr = detect_traced(scene.img);
    ASSERT_FALSE(tr.groups.empty());
    std::vector<int> seen(tr.segments.size(), 0);
    for (const auto& g : tr.groups) {
        for (int m : g.members) {
            ++seen[m];
            EXPECT_EQ(tr.segments[m].polarity, g.polarity);
        }
        for (double d : g.intervals) {
            EXPECT_GT(d, 0.0);
            EXPECT_LT(d, 45.0);
        }
        EXPECT_LE(g.spanning_angle, 360.0 + 6 * 45.0);
    }
    for (int n : seen) EXPECT_EQ(n, 1);  // a partition of the segments
}

TEST(Link, PermutationGivesSameGroups) {
    const auto scene = scenes::two_ellipses_with_bars();
    const DetectionTrace tr = detect_traced(scene.img);
    const GradientMap& g = tr.extraction.gradient;
    const GroupingParams gp;
    const auto base = link_groups(tr.segments, tr.extraction.region_label, g.width, g.height, gp);

    std::vector<int> perm(tr.segments.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(5));
    std::vector<ArcSupportLS> shuffled;
    for (int i : perm) shuffled.push_back(tr.segments[i]);
    const auto again = link_groups(shuffled, tr.extraction.region_label, g.width, g.height, gp);

    std::set<std::vector<int>> a, b;
    for (const auto& grp : base) {
        std::vector<int> ids;
        for (int m : grp.members) ids.push_back(tr.segments[m].region_id);
        a.insert(ids);
    }
    for (const auto& grp : again) {
        std::vector<int> ids;
        for (int m : grp.members) ids.push_back(shuffled[m].region_id);
        b.insert(ids);
    }
    EXPECT_EQ(a, b);
}
