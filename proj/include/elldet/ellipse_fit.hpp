#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "elldet/geometry.hpp"

namespace elldet {

/// Geometric ellipse. `phi_deg` is the major-axis direction in [0, 180),
/// `a >= b > 0`. Polarity is +1 (interior brighter), -1 (interior darker) or
/// 0 when unknown.
struct EllipseGeom {
    Point2 center;
    double phi_deg = 0.0;
    double a = 0.0;
    double b = 0.0;
    int polarity = 0;

    /// Builds a normalized ellipse: axes swapped if needed, phi wrapped to
    /// [0, 180), and phi pinned to 0 for circles.
    static EllipseGeom make(Point2 center, double a, double b, double phi_deg, int polarity = 0);

    bool is_circle() const;
};

/// Implicit conic A x^2 + B xy + C y^2 + D x + E y + F = 0.
struct Conic {
    double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;
};

Conic to_conic(const EllipseGeom& e);

/// Throws Error{NonEllipse} for hyperbolas, parabolas and imaginary ellipses.
EllipseGeom from_conic(const Conic& c);

/// Isotropic similarity applied to points before they enter a scatter matrix:
/// p' = (p - offset) * scale. Scatters can only be merged when they share one.
struct Normalization {
    Point2 offset{};
    double scale = 1.0;

    Point2 apply(Point2 p) const { return (p - offset) * scale; }
    bool operator==(const Normalization&) const = default;

    /// Image-global transform: image center, scale 2 / diagonal.
    static Normalization for_image(int width, int height);
};

/// Mergeable accumulator S = D^T D over design rows [x^2, xy, y^2, x, y, 1].
class ScatterMatrix {
public:
    using Matrix6 = Eigen::Matrix<double, 6, 6>;
    using Accum6 = Eigen::Matrix<long double, 6, 6>;  // extended precision keeps off-center moments usable

    explicit ScatterMatrix(Normalization norm = {});

    void add(Point2 p);
    ScatterMatrix& operator+=(const ScatterMatrix& other);

    Matrix6 matrix() const { return s_.cast<double>(); }
    const Accum6& accumulator() const { return s_; }
    std::size_t count() const { return count_; }
    const Normalization& normalization() const { return norm_; }

private:
    Accum6 s_;
    std::size_t count_ = 0;
    Normalization norm_;
};

ScatterMatrix accumulate_scatter(std::span<const Point2> points, Normalization norm = {});

/// Elementwise sum; every part must carry the same normalization.
ScatterMatrix merge_scatter(std::span<const ScatterMatrix> parts);

/// Direct least-squares ellipse fit of an accumulated scatter. Solves
/// S u = lambda C u through the 3x3 reduced eigenproblem and keeps the
/// eigenvector with 4 u0 u2 - u1^2 > 0. Throws Singular or NonEllipse.
EllipseGeom fit_ellipse(const ScatterMatrix& s);

/// Fit from raw points, normalized by their own centroid and spread.
EllipseGeom fit_ellipse(std::span<const Point2> points);

/// Approximate Euclidean distance from p to the ellipse boundary: distance to
/// where the confocal hyperbola through p meets the ellipse, tightened by two
/// guarded Newton steps on the foot point (exact for circles).
double rosin_distance(Point2 p, const EllipseGeom& e);

/// Outward unit normal of the conic evaluated at p. Throws AtCenter.
Point2 ellipse_normal(Point2 p, const EllipseGeom& e);

/// pi * (1.5 (a + b) - sqrt(a b))
double perimeter_approx(const EllipseGeom& e);

/// Boundary point at parametric (eccentric) angle t, in radians.
Point2 point_at(const EllipseGeom& e, double t_rad);

/// Parametric (eccentric) angle of p, in degrees [0, 360).
double parametric_angle(Point2 p, const EllipseGeom& e);

/// Point expressed in the ellipse's own frame (center origin, major axis +x).
Point2 to_local(Point2 p, const EllipseGeom& e);

bool contains(const EllipseGeom& e, Point2 p);

/// Samples the boundary with at most `step` pixels of arc length between points.
std::vector<Point2> sample_boundary(const EllipseGeom& e, double step);

}  // namespace elldet
