#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "elldet/error.hpp"
#include "elldet/ellipse_fit.hpp"
#include "scenes.hpp"

using namespace elldet;

namespace {

ErrorCode fit_error(std::span<const Point2> pts) {
    try {
        (void)fit_ellipse(pts);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "fit succeeded";
    return ErrorCode::InvalidArgument;
}

std::vector<Point2> boundary(const EllipseGeom& e, int n, double t0 = 0.0, double span = 2 * std::numbers::pi) {
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) pts.push_back(point_at(e, t0 + span * i / n));
    return pts;
}

void expect_same(const EllipseGeom& got, const EllipseGeom& want, double tol) {
    EXPECT_NEAR(got.center.x, want.center.x, tol);
    EXPECT_NEAR(got.center.y, want.center.y, tol);
    EXPECT_NEAR(got.a, want.a, tol);
    EXPECT_NEAR(got.b, want.b, tol);
    if (!want.is_circle()) {
        EXPECT_LT(abs_angle_diff(got.phi_deg, want.phi_deg, 180.0), tol * 100);
    }
}

}  // namespace

TEST(Make, Normalizes) {
    const EllipseGeom swapped = EllipseGeom::make({1, 2}, 3, 5, 10);
    EXPECT_EQ(swapped.a, 5);
    EXPECT_EQ(swapped.b, 3);
    EXPECT_DOUBLE_EQ(swapped.phi_deg, 100);
    EXPECT_DOUBLE_EQ(EllipseGeom::make({}, 5, 3, -30).phi_deg, 150);
    EXPECT_DOUBLE_EQ(EllipseGeom::make({}, 5, 3, 180).phi_deg, 0);
    const EllipseGeom circle = EllipseGeom::make({}, 5, 5, 33);
    EXPECT_TRUE(circle.is_circle());
    EXPECT_EQ(circle.phi_deg, 0);
}

TEST(Scatter, SinglePointIsOuterProduct) {
    ScatterMatrix s;
    s.add({1, 2});
    const double row[6] = {1, 2, 4, 1, 2, 1};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) EXPECT_EQ(s.matrix()(i, j), row[i] * row[j]);
    EXPECT_EQ(s.count(), 1u);
}

TEST(Scatter, NormalizationAppliedBeforeAccumulation) {
    const Normalization n{{1, 1}, 0.5};
    ScatterMatrix s(n);
    s.add({3, 5});  // normalized to (1, 2)
    EXPECT_EQ(s.matrix()(0, 0), 1);
    EXPECT_EQ(s.matrix()(2, 2), 16);
    EXPECT_EQ(s.matrix()(1, 5), 2);
}

TEST(Scatter, MergeEqualsAccumulatingTheUnion) {
    const std::vector<Point2> p1{{1, 2}, {3, -1}, {0.5, 7}}, p2{{-2, 4}, {6, 6}};
    const Normalization n = Normalization::for_image(20, 10);
    const ScatterMatrix parts[2] = {accumulate_scatter(p1, n), accumulate_scatter(p2, n)};
    std::vector<Point2> all = p1;
    all.insert(all.end(), p2.begin(), p2.end());
    const ScatterMatrix merged = merge_scatter(parts), direct = accumulate_scatter(all, n);
    EXPECT_EQ(merged.count(), 5u);
    EXPECT_LT((merged.matrix() - direct.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Scatter, MergeRejectsMixedNormalizations) {
    const ScatterMatrix parts[2] = {ScatterMatrix(Normalization{}), ScatterMatrix(Normalization{{1, 0}, 1.0})};
    try {
        (void)merge_scatter(parts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
}

TEST(Fit, RecoversCircle) {
    const EllipseGeom truth = EllipseGeom::make({3, 4}, 5, 5, 0);
    const auto pts = boundary(truth, 12);
    const EllipseGeom got = fit_ellipse(pts);
    expect_same(got, truth, 1e-9);
    EXPECT_TRUE(got.is_circle() || got.a - got.b < 1e-9);
}

TEST(Fit, RecoversEllipseFromTwelvePoints) {
    const EllipseGeom truth = EllipseGeom::make({120, 80}, 60, 25, 35);
    expect_same(fit_ellipse(boundary(truth, 12)), truth, 1e-8);
}

TEST(Fit, RecoversEllipseFromQuarterArc) {
    const EllipseGeom truth = EllipseGeom::make({-40, 10}, 30, 12, 170);
    expect_same(fit_ellipse(boundary(truth, 40, 0.3, std::numbers::pi / 2)), truth, 1e-7);
}

TEST(Fit, ScatterPathMatchesPointPath) {
    const EllipseGeom truth = EllipseGeom::make({300, 200}, 15, 9, 70);
    const auto pts = boundary(truth, 30);
    const EllipseGeom via_scatter = fit_ellipse(accumulate_scatter(pts, Normalization::for_image(640, 480)));
    expect_same(via_scatter, truth, 1e-8);
}

TEST(Fit, DegenerateInputs) {
    const std::vector<Point2> four{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    EXPECT_EQ(fit_error(four), ErrorCode::Singular);
    std::vector<Point2> line;
    for (int i = 0; i < 10; ++i) line.push_back({double(i), 2.0 * i + 1});
    EXPECT_EQ(fit_error(line), ErrorCode::Singular);
    const std::vector<Point2> same(8, Point2{3, 3});
    EXPECT_EQ(fit_error(same), ErrorCode::Singular);
}

TEST(Fit, NoisyPointsWithinOnePercent) {
    const EllipseGeom truth = EllipseGeom::make({200, 150}, 80, 40, 30);
    std::mt19937 rng(7);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::vector<Point2> pts;
    for (Point2 p : boundary(truth, 200)) pts.push_back(p + Point2{noise(rng), noise(rng)});
    const EllipseGeom got = fit_ellipse(pts);
    EXPECT_LT(distance(got.center, truth.center), 0.01 * truth.a);
    EXPECT_NEAR(got.a, truth.a, 0.01 * truth.a);
    EXPECT_NEAR(got.b, truth.b, 0.01 * truth.b);
    EXPECT_LT(abs_angle_diff(got.phi_deg, truth.phi_deg, 180.0), 1.0);
}

TEST(Fit, TranslationAndRotationEquivariance) {
    std::mt19937 rng(3);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<Point2> pts;
    for (Point2 p : boundary(EllipseGeom::make({50, 60}, 40, 22, 10), 60)) pts.push_back(p + Point2{noise(rng), noise(rng)});
    const EllipseGeom base = fit_ellipse(pts);

    const Point2 shift{123.5, -47.25};
    std::vector<Point2> moved;
    for (Point2 p : pts) moved.push_back(p + shift);
    const EllipseGeom t = fit_ellipse(moved);
    expect_same(t, EllipseGeom::make(base.center + shift, base.a, base.b, base.phi_deg), 1e-7);

    const double th = deg2rad(40.0), c = std::cos(th), s = std::sin(th);
    std::vector<Point2> turned;
    for (Point2 p : pts) turned.push_back({c * p.x - s * p.y, s * p.x + c * p.y});
    const EllipseGeom r = fit_ellipse(turned);
    const Point2 rc{c * base.center.x - s * base.center.y, s * base.center.x + c * base.center.y};
    expect_same(r, EllipseGeom::make(rc, base.a, base.b, base.phi_deg + 40.0), 1e-7);
}

TEST(Conic, RoundTrip) {
    const EllipseGeom e = EllipseGeom::make({7, -3}, 9, 4, 125);
    expect_same(from_conic(to_conic(e)), e, 1e-9);
    for (Point2 p : boundary(e, 16)) {
        const Conic q = to_conic(e);
        const double v = q.A * p.x * p.x + q.B * p.x * p.y + q.C * p.y * p.y + q.D * p.x + q.E * p.y + q.F;
        EXPECT_NEAR(v, 0.0, 1e-9 * (std::abs(q.F) + 1));
    }
}

TEST(Conic, NonEllipsesRejected) {
    for (const Conic c : {Conic{1, 0, -1, 0, 0, -1}, Conic{1, 0, 1, 0, 0, 1}, Conic{0, 0, 1, 1, 0, 0}}) {
        try {
            (void)from_conic(c);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::NonEllipse);
        }
    }
}

TEST(Rosin, ClosedFormExamples) {
    const EllipseGeom circle = EllipseGeom::make({0, 0}, 5, 5, 0);
    EXPECT_NEAR(rosin_distance({0, 10}, circle), 5.0, 1e-12);
    EXPECT_NEAR(rosin_distance({3, 4}, circle), 0.0, 1e-12);
    const EllipseGeom e = EllipseGeom::make({0, 0}, 10, 5, 0);
    EXPECT_NEAR(rosin_distance({12, 0}, e), 2.0, 1e-9);
    EXPECT_NEAR(rosin_distance({0, 7}, e), 2.0, 1e-9);
    EXPECT_NEAR(rosin_distance({0, -3}, e), 2.0, 1e-9);
    const EllipseGeom turned = EllipseGeom::make({10, 20}, 10, 5, 90);
    EXPECT_NEAR(rosin_distance({10, 32}, turned), 2.0, 1e-9);
}

TEST(Rosin, TracksOrthogonalDistance) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 40; ++k) {
        const EllipseGeom e = EllipseGeom::make({0, 0}, 20 + 60 * U(rng), 5 + 15 * U(rng), 180 * U(rng));
        for (int i = 0; i < 50; ++i) {
            const Point2 on = point_at(e, 2 * std::numbers::pi * U(rng));
            const Point2 p = on + Point2{6 * U(rng) - 3, 6 * U(rng) - 3};
            const double oracle = scenes::newton_distance(p, e);
            const double got = rosin_distance(p, e);
            EXPECT_GE(got, oracle - 1e-9);  // always the distance to some boundary point
            worst = std::max(worst, (got - oracle) / std::max(oracle, 0.5));
        }
    }
    EXPECT_LT(worst, 0.02);
}

TEST(Normal, PointsOutward) {
    const EllipseGeom circle = EllipseGeom::make({0, 0}, 5, 5, 0);
    const Point2 n = ellipse_normal({5, 0}, circle);
    EXPECT_NEAR(n.x, 1.0, 1e-12);
    EXPECT_NEAR(n.y, 0.0, 1e-12);
    const EllipseGeom e = EllipseGeom::make({0, 0}, 10, 5, 90);
    const Point2 m = ellipse_normal({0, 10}, e);
    EXPECT_NEAR(m.x, 0.0, 1e-12);
    EXPECT_NEAR(m.y, 1.0, 1e-12);
    const EllipseGeom f = EllipseGeom::make({0, 0}, 10, 5, 0);
    const Point2 q = point_at(f, 0.7);
    const Point2 want = normalized(Point2{q.x / 100.0, q.y / 25.0});
    const Point2 got = ellipse_normal(q, f);
    EXPECT_NEAR(got.x, want.x, 1e-12);
    EXPECT_NEAR(got.y, want.y, 1e-12);
}

TEST(Normal, UndefinedAtCenter) {
    try {
        (void)ellipse_normal({4, 4}, EllipseGeom::make({4, 4}, 6, 3, 20));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AtCenter);
    }
}

TEST(Perimeter, Examples) {
    EXPECT_NEAR(perimeter_approx(EllipseGeom::make({}, 7, 7, 0)), 2 * std::numbers::pi * 7, 1e-12);
    EXPECT_NEAR(perimeter_approx(EllipseGeom::make({}, 2, 1, 0)), std::numbers::pi * (4.5 - std::sqrt(2.0)), 1e-12);
    // Close to the series value for a = 2b.
    EXPECT_NEAR(perimeter_approx(EllipseGeom::make({}, 2, 1, 0)), 9.688448, 0.01);
}

TEST(Parametric, AngleInvertsPointAt) {
    const EllipseGeom e = EllipseGeom::make({5, 5}, 9, 3, 60);
    for (double deg : {0.0, 30.0, 135.0, 270.0, 359.0}) {
        EXPECT_NEAR(parametric_angle(point_at(e, deg2rad(deg)), e), deg, 1e-9);
    }
    EXPECT_TRUE(contains(e, {5, 5}));
    EXPECT_FALSE(contains(e, point_at(e, 1.0) + (point_at(e, 1.0) - e.center) * 0.01));
}

TEST(Parametric, BoundarySamplingStep) {
    const EllipseGeom e = EllipseGeom::make({0, 0}, 50, 20, 10);
    const auto pts = sample_boundary(e, 1.0);
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_LE(distance(pts[i], pts[(i + 1) % pts.size()]), 1.0 + 1e-9);
}
