#pragma once
// Synthetic scenes and independent oracles shared by the tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "elldet/ellipse_fit.hpp"
#include "elldet/image.hpp"
#include "elldet/render.hpp"

namespace scenes {

using elldet::EllipseGeom;
using elldet::GrayImage;
using elldet::Point2;

struct Scene {
    GrayImage img;
    std::vector<EllipseGeom> truth;  // polarity set from construction
};

inline Scene single(double a, double b, double phi, int side = 250, double fg = 40, double bg = 220) {
    Scene s{GrayImage(side, side, bg), {EllipseGeom::make({side / 2.0, side / 2.0}, a, b, phi, fg > bg ? 1 : -1)}};
    elldet::paint_ellipse(s.img, s.truth[0], fg);
    return s;
}

// Two bold ellipses among straight bars.
inline Scene two_ellipses_with_bars() {
    Scene s{GrayImage(320, 240, 200.0), {}};
    elldet::paint_bar(s.img, {60, 40}, 90, 7, 10, 60);
    elldet::paint_bar(s.img, {270, 200}, 80, 6, 75, 60);
    elldet::paint_bar(s.img, {160, 220}, 120, 5, 0, 90);
    elldet::paint_bar(s.img, {290, 60}, 70, 8, 120, 40);
    elldet::paint_bar(s.img, {30, 170}, 60, 6, 95, 50);
    s.truth.push_back(EllipseGeom::make({110, 115}, 60, 38, 20, -1));
    s.truth.push_back(EllipseGeom::make({225, 120}, 42, 30, 135, -1));
    for (const auto& e : s.truth) elldet::paint_ellipse(s.img, e, 45);
    return s;
}

// Nested ellipses whose boundaries are `gap` pixels apart, alternating fill.
inline Scene concentric(int count = 8, double gap = 6.0) {
    Scene s{GrayImage(260, 260, 220.0), {}};
    double outside = 220.0;
    for (int k = 0; k < count; ++k) {
        const double fill = (k % 2 == 0) ? 40.0 : 220.0;
        EllipseGeom e = EllipseGeom::make({130, 130}, 112 - gap * k, 82 - gap * k, 25, fill > outside ? 1 : -1);
        elldet::paint_ellipse(s.img, e, fill);
        s.truth.push_back(e);
        outside = fill;
    }
    return s;
}

// Gray ground with one bright belt and one dark belt per ring set.
inline Scene ring_belt() {
    Scene s{GrayImage(400, 240, 128.0), {}};
    auto belt = [&](Point2 c, double a, double b, double phi, double width, double value) {
        const EllipseGeom outer = EllipseGeom::make(c, a, b, phi, value > 128 ? 1 : -1);
        const EllipseGeom inner = EllipseGeom::make(c, a - width, b - width, phi, value > 128 ? -1 : 1);
        elldet::paint_ellipse(s.img, outer, value);
        elldet::paint_ellipse(s.img, inner, 128.0);
        s.truth.push_back(outer);
        s.truth.push_back(inner);
    };
    belt({110, 120}, 90, 70, 0, 12, 220);
    belt({110, 120}, 55, 38, 0, 12, 30);
    belt({300, 120}, 80, 55, 60, 12, 30);
    belt({300, 120}, 46, 28, 60, 12, 220);
    return s;
}

// Scene at an arbitrary size with ellipses and bars placed relative to it.
inline GrayImage wide_scene(int w, int h) {
    GrayImage img(w, h, 190.0);
    const double s = std::min(w, h) / 435.0;
    elldet::paint_bar(img, {0.2 * w, 0.15 * h}, 160 * s, 9 * s, 15, 70);
    elldet::paint_bar(img, {0.75 * w, 0.85 * h}, 220 * s, 7 * s, 160, 70);
    elldet::paint_bar(img, {0.5 * w, 0.5 * h}, 120 * s, 10 * s, 80, 240);
    elldet::paint_ellipse(img, EllipseGeom::make({0.25 * w, 0.55 * h}, 110 * s, 70 * s, 30), 50);
    elldet::paint_ellipse(img, EllipseGeom::make({0.7 * w, 0.4 * h}, 90 * s, 85 * s, 0), 245);
    elldet::paint_ellipse(img, EllipseGeom::make({0.88 * w, 0.2 * h}, 40 * s, 20 * s, 100), 30);
    elldet::paint_ellipse(img, EllipseGeom::make({0.45 * w, 0.85 * h}, 45 * s, 35 * s, 150), 120, 220);
    return img;
}

// Orthogonal distance to the ellipse boundary: dense sampling of the
// parametric angle followed by Newton steps on the stationarity condition.
inline double newton_distance(Point2 p, const EllipseGeom& e) {
    const double c = std::cos(e.phi_deg * std::numbers::pi / 180.0), s = std::sin(e.phi_deg * std::numbers::pi / 180.0);
    const double dx = p.x - e.center.x, dy = p.y - e.center.y;
    const double u = c * dx + s * dy, v = -s * dx + c * dy;
    auto d2 = [&](double t) { return std::pow(e.a * std::cos(t) - u, 2) + std::pow(e.b * std::sin(t) - v, 2); };
    double best_t = 0.0, best = d2(0.0);
    const int n = 720;
    for (int i = 1; i < n; ++i) {
        const double t = 2 * std::numbers::pi * i / n;
        if (d2(t) < best) best = d2(t), best_t = t;
    }
    double t = best_t;
    const double k = e.a * e.a - e.b * e.b;
    for (int it = 0; it < 50; ++it) {
        const double f = k * std::sin(t) * std::cos(t) - u * e.a * std::sin(t) + v * e.b * std::cos(t);
        const double fp = k * std::cos(2 * t) - u * e.a * std::cos(t) - v * e.b * std::sin(t);
        if (fp == 0.0) break;
        const double nt = t - f / fp;
        if (d2(nt) > d2(t) + 1e-15) break;
        if (std::abs(nt - t) < 1e-14) {
            t = nt;
            break;
        }
        t = nt;
    }
    return std::sqrt(std::min(d2(t), best));
}

// Filled-ellipse IoU by dense point sampling, independent of the library rasterizer.
inline double sampled_iou(const EllipseGeom& e1, const EllipseGeom& e2, int w, int h, int ss = 2) {
    auto inside = [](const EllipseGeom& e, double x, double y) {
        const double c = std::cos(e.phi_deg * std::numbers::pi / 180.0);
        const double s = std::sin(e.phi_deg * std::numbers::pi / 180.0);
        const double dx = x - e.center.x, dy = y - e.center.y;
        const double u = (c * dx + s * dy) / e.a, v = (-s * dx + c * dy) / e.b;
        return u * u + v * v <= 1.0;
    };
    long inter = 0, uni = 0;
    for (int y = 0; y < h * ss; ++y)
        for (int x = 0; x < w * ss; ++x) {
            const double px = (x + 0.5) / ss - 0.5, py = (y + 0.5) / ss - 0.5;
            const bool i1 = inside(e1, px, py), i2 = inside(e2, px, py);
            inter += i1 && i2;
            uni += i1 || i2;
        }
    return uni ? double(inter) / uni : 0.0;
}

}  // namespace scenes
