#include "elldet/render.hpp"

#include <algorithm>
#include <cmath>

namespace elldet {

namespace {

struct Box {
    int x0, y0, x1, y1;
};

Box clip_box(double cx, double cy, double hx, double hy, int w, int h) {
    return {std::max(0, int(std::floor(cx - hx)) - 1), std::max(0, int(std::floor(cy - hy)) - 1),
            std::min(w - 1, int(std::ceil(cx + hx)) + 1), std::min(h - 1, int(std::ceil(cy + hy)) + 1)};
}

// `margin(p)` returns a lower bound on the pixel distance from p to the shape
// boundary, signed positive inside; pixels farther than one pixel skip supersampling.
template <class Inside, class Margin>
void blend(GrayImage& img, const Box& box, double value, int ss, Inside inside, Margin margin) {
    const double inv = 1.0 / ss;
    for (int y = box.y0; y <= box.y1; ++y)
        for (int x = box.x0; x <= box.x1; ++x) {
            const Point2 p{double(x), double(y)};
            double frac;
            const double m = margin(p);
            if (m > 1.0) {
                frac = 1.0;
            } else if (m < -1.0) {
                frac = 0.0;
            } else {
                int hit = 0;
                for (int j = 0; j < ss; ++j)
                    for (int i = 0; i < ss; ++i)
                        hit += inside(Point2{x - 0.5 + (i + 0.5) * inv, y - 0.5 + (j + 0.5) * inv});
                frac = double(hit) / (ss * ss);
            }
            if (frac > 0.0) img.at(x, y) = img.at(x, y) * (1.0 - frac) + value * frac;
        }
}

}  // namespace

void paint_ellipse(GrayImage& img, const EllipseGeom& e, double value, double coverage_deg, int supersample) {
    const double t = deg2rad(e.phi_deg);
    const double c = std::cos(t), s = std::sin(t);
    const double hx = std::sqrt(e.a * e.a * c * c + e.b * e.b * s * s);
    const double hy = std::sqrt(e.a * e.a * s * s + e.b * e.b * c * c);
    const Box box = clip_box(e.center.x, e.center.y, hx, hy, img.width, img.height);
    const bool full = coverage_deg >= 360.0;
    // In the unit-disk image of the ellipse the chord sits at distance cos(cov/2) along +u.
    const double chord = std::cos(deg2rad(std::clamp(coverage_deg, 0.0, 360.0)) / 2.0);

    auto unit = [&](Point2 p) {
        const Point2 l = to_local(p, e);
        return Point2{l.x / e.a, l.y / e.b};
    };
    auto inside = [&](Point2 p) {
        const Point2 q = unit(p);
        return dot(q, q) <= 1.0 && (full || q.x >= chord);
    };
    auto margin = [&](Point2 p) {
        const Point2 q = unit(p);
        const double r = norm(q);
        double m = (1.0 - r) * e.b;
        if (!full) m = std::min(m, (q.x - chord) * e.b);
        return m;
    };
    blend(img, box, value, supersample, inside, margin);
}

void paint_bar(GrayImage& img, Point2 center, double length, double width, double angle_deg, double value,
               int supersample) {
    const Point2 u = unit_from_angle(angle_deg);
    const Point2 v = rotate_plus90(u);
    const double hl = 0.5 * length, hw = 0.5 * width;
    const double ext = hl + hw;
    const Box box = clip_box(center.x, center.y, ext, ext, img.width, img.height);
    auto margin = [&](Point2 p) {
        const Point2 d = p - center;
        return std::min(hl - std::abs(dot(d, u)), hw - std::abs(dot(d, v)));
    };
    auto inside = [&](Point2 p) { return margin(p) >= 0.0; };
    blend(img, box, value, supersample, inside, margin);
}

std::vector<std::uint8_t> rasterize_ellipse(const EllipseGeom& e, int width, int height) {
    std::vector<std::uint8_t> mask(std::size_t(width) * height, 0);
    const double t = deg2rad(e.phi_deg);
    const double c = std::cos(t), s = std::sin(t);
    const double hx = std::sqrt(e.a * e.a * c * c + e.b * e.b * s * s);
    const double hy = std::sqrt(e.a * e.a * s * s + e.b * e.b * c * c);
    const Box box = clip_box(e.center.x, e.center.y, hx, hy, width, height);
    for (int y = box.y0; y <= box.y1; ++y)
        for (int x = box.x0; x <= box.x1; ++x)
            if (contains(e, {double(x), double(y)})) mask[std::size_t(y) * width + x] = 1;
    return mask;
}

void draw_ellipse(RgbImage& img, const EllipseGeom& e, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    for (const Point2& p : sample_boundary(e, 0.5))
        img.set(int(std::lround(p.x)), int(std::lround(p.y)), r, g, b);
}

}  // namespace elldet
