#pragma once

#include "elldet/ellipse_fit.hpp"
#include "elldet/image.hpp"

namespace elldet {

/// Blends a filled ellipse into `img` with value `value`, anti-aliased by
/// supersample x supersample sub-pixel samples. With coverage below 360 the
/// shape is the elliptic segment cut by the chord of the parametric arc
/// [-coverage/2, +coverage/2] around the major-axis vertex at t = 0.
void paint_ellipse(GrayImage& img, const EllipseGeom& e, double value, double coverage_deg = 360.0,
                   int supersample = 4);

/// Blends a filled rotated rectangle.
void paint_bar(GrayImage& img, Point2 center, double length, double width, double angle_deg, double value,
               int supersample = 4);

/// Pixel-center rasterization of a filled ellipse: 1 inside, 0 outside.
std::vector<std::uint8_t> rasterize_ellipse(const EllipseGeom& e, int width, int height);

/// Draws a 1 px boundary polyline.
void draw_ellipse(RgbImage& img, const EllipseGeom& e, std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace elldet
