#include "elldet/ellipse_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "elldet/error.hpp"

namespace elldet {

namespace {

constexpr double kCircleRelTol = 1e-9;

}  // namespace

EllipseGeom EllipseGeom::make(Point2 center, double a, double b, double phi_deg, int polarity) {
    EllipseGeom e;
    e.center = center;
    e.polarity = polarity;
    a = std::abs(a);
    b = std::abs(b);
    if (b > a) {
        std::swap(a, b);
        phi_deg += 90.0;
    }
    e.a = a;
    e.b = b;
    e.phi_deg = wrap_angle(phi_deg, 180.0);
    if (e.is_circle()) e.phi_deg = 0.0;
    return e;
}

bool EllipseGeom::is_circle() const { return a - b <= kCircleRelTol * a; }

Conic to_conic(const EllipseGeom& e) {
    const double t = deg2rad(e.phi_deg);
    const double c = std::cos(t), s = std::sin(t);
    const double a2 = e.a * e.a, b2 = e.b * e.b;
    Conic q;
    q.A = b2 * c * c + a2 * s * s;
    q.B = 2.0 * (b2 - a2) * s * c;
    q.C = b2 * s * s + a2 * c * c;
    const double x0 = e.center.x, y0 = e.center.y;
    q.D = -2.0 * q.A * x0 - q.B * y0;
    q.E = -q.B * x0 - 2.0 * q.C * y0;
    q.F = q.A * x0 * x0 + q.B * x0 * y0 + q.C * y0 * y0 - a2 * b2;
    return q;
}

EllipseGeom from_conic(const Conic& in) {
    Conic c = in;
    if (c.A + c.C < 0.0) {
        c.A = -c.A; c.B = -c.B; c.C = -c.C; c.D = -c.D; c.E = -c.E; c.F = -c.F;
    }
    const double den = 4.0 * c.A * c.C - c.B * c.B;
    const double scale = std::max({std::abs(c.A), std::abs(c.B), std::abs(c.C)});
    if (!(scale > 0.0) || !(den > 1e-14 * scale * scale))
        throw Error(ErrorCode::NonEllipse, "conic discriminant is not positive");

    const double x0 = (c.B * c.E - 2.0 * c.C * c.D) / den;
    const double y0 = (c.B * c.D - 2.0 * c.A * c.E) / den;
    const double f0 = c.F + 0.5 * (c.D * x0 + c.E * y0);

    const double mid = 0.5 * (c.A + c.C);
    const double r = std::hypot(0.5 * (c.A - c.C), 0.5 * c.B);
    const double lmin = mid - r;
    const double lmax = mid + r;
    if (!(lmin > 0.0) || !(-f0 > 0.0))
        throw Error(ErrorCode::NonEllipse, "conic has no real ellipse");

    const double a = std::sqrt(-f0 / lmin);
    const double b = std::sqrt(-f0 / lmax);
    // The quadratic form peaks along 0.5*atan2(B, A-C); that is the minor axis.
    const double phi = rad2deg(0.5 * std::atan2(c.B, c.A - c.C)) + 90.0;
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x0) || !std::isfinite(y0))
        throw Error(ErrorCode::NonEllipse, "non-finite ellipse parameters");
    return EllipseGeom::make({x0, y0}, a, b, phi);
}

Normalization Normalization::for_image(int width, int height) {
    Normalization n;
    n.offset = {0.5 * (width - 1), 0.5 * (height - 1)};
    const double diag = std::hypot(double(width), double(height));
    n.scale = diag > 0.0 ? 2.0 / diag : 1.0;
    return n;
}

ScatterMatrix::ScatterMatrix(Normalization norm) : s_(Accum6::Zero()), norm_(norm) {}

void ScatterMatrix::add(Point2 p) {
    const Point2 q = norm_.apply(p);
    const long double x = q.x, y = q.y;
    Eigen::Matrix<long double, 6, 1> d;
    d << x * x, x * y, y * y, x, y, 1.0L;
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) s_(i, j) += d(i) * d(j);
    s_.triangularView<Eigen::StrictlyLower>() = s_.transpose();
    ++count_;
}

ScatterMatrix& ScatterMatrix::operator+=(const ScatterMatrix& other) {
    if (!(norm_ == other.norm_))
        throw Error(ErrorCode::InvalidArgument, "scatter matrices use different normalizations");
    s_ += other.s_;
    count_ += other.count_;
    return *this;
}

ScatterMatrix accumulate_scatter(std::span<const Point2> points, Normalization norm) {
    ScatterMatrix s(norm);
    for (const Point2& p : points) s.add(p);
    return s;
}

ScatterMatrix merge_scatter(std::span<const ScatterMatrix> parts) {
    if (parts.empty()) return ScatterMatrix{};
    ScatterMatrix s(parts.front().normalization());
    for (const auto& p : parts) s += p;
    return s;
}

namespace {

// Design-row map for x = s x' + o: d(x) = M d(x').
ScatterMatrix::Accum6 monomial_map(long double s, long double ox, long double oy) {
    ScatterMatrix::Accum6 m = ScatterMatrix::Accum6::Zero();
    m.row(0) << s * s, 0, 0, 2 * s * ox, 0, ox * ox;
    m.row(1) << 0, s * s, 0, s * oy, s * ox, ox * oy;
    m.row(2) << 0, 0, s * s, 0, 2 * s * oy, oy * oy;
    m.row(3) << 0, 0, 0, s, 0, ox;
    m.row(4) << 0, 0, 0, 0, s, oy;
    m(5, 5) = 1;
    return m;
}

}  // namespace

EllipseGeom fit_ellipse(const ScatterMatrix& scatter) {
    if (scatter.count() < 5) throw Error(ErrorCode::Singular, "fewer than five points");

    // Move the scatter to the points' own centroid and spread. The fit is
    // similarity covariant, so only the conditioning changes.
    const auto& S0 = scatter.accumulator();
    const long double n = S0(5, 5);
    const long double mx = S0(3, 5) / n, my = S0(4, 5) / n;
    const long double var = 0.5L * ((S0(0, 5) + S0(2, 5)) / n - mx * mx - my * my);
    if (!(var > 0.0L)) throw Error(ErrorCode::Singular, "all points coincide");
    const long double sd = std::sqrt(var);
    const auto Minv = monomial_map(1.0L / sd, -mx / sd, -my / sd);
    const ScatterMatrix::Matrix6 S = (Minv * S0 * Minv.transpose()).cast<double>();
    const Point2 mean{double(mx), double(my)};
    const double spread = double(sd);
    const Eigen::Matrix3d S1 = S.topLeftCorner<3, 3>();
    const Eigen::Matrix3d S2 = S.topRightCorner<3, 3>();
    const Eigen::Matrix3d S3 = S.bottomRightCorner<3, 3>();

    // S3 is the scatter of [x, y, 1]; it is rank deficient for collinear input.
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(S3);
    const auto sv = svd.singularValues();
    if (!(sv(2) > 1e-12 * sv(0))) throw Error(ErrorCode::Singular, "points are collinear");

    const Eigen::Matrix3d T = -S3.inverse() * S2.transpose();
    const Eigen::Matrix3d M0 = S1 + S2 * T;
    // Premultiply by inverse of C1 = [[0,0,2],[0,-1,0],[2,0,0]].
    Eigen::Matrix3d M;
    M.row(0) = M0.row(2) / 2.0;
    M.row(1) = -M0.row(1);
    M.row(2) = M0.row(0) / 2.0;

    Eigen::EigenSolver<Eigen::Matrix3d> es(M);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::Singular, "eigen decomposition failed");

    int best = -1;
    double best_lambda = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const Eigen::Vector3d v = es.eigenvectors().col(i).real();
        if (std::abs(es.eigenvalues()(i).imag()) > 1e-9 * (1.0 + std::abs(es.eigenvalues()(i).real())))
            continue;
        const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
        if (cond > 0.0 && std::abs(es.eigenvalues()(i).real()) < best_lambda) {
            best = i;
            best_lambda = std::abs(es.eigenvalues()(i).real());
        }
    }
    if (best < 0) throw Error(ErrorCode::NonEllipse, "no elliptic eigenvector");

    const Eigen::Vector3d a1 = es.eigenvectors().col(best).real();
    const Eigen::Vector3d a2 = T * a1;
    const Conic q{a1(0), a1(1), a1(2), a2(0), a2(1), a2(2)};
    const EllipseGeom g = from_conic(q);

    const Normalization& nm = scatter.normalization();
    const Point2 c = (g.center * spread + mean) / nm.scale + nm.offset;
    const double k = spread / nm.scale;
    return EllipseGeom::make(c, g.a * k, g.b * k, g.phi_deg);
}

EllipseGeom fit_ellipse(std::span<const Point2> points) {
    if (points.size() < 5) throw Error(ErrorCode::Singular, "fewer than five points");
    Point2 mean{};
    for (const Point2& p : points) mean += p;
    mean = mean / double(points.size());
    double ss = 0.0;
    for (const Point2& p : points) {
        const Point2 d = p - mean;
        ss += dot(d, d);
    }
    const double rms = std::sqrt(ss / double(points.size()));
    if (!(rms > 0.0)) throw Error(ErrorCode::Singular, "all points coincide");
    Normalization n;
    n.offset = mean;
    n.scale = std::sqrt(2.0) / rms;
    return fit_ellipse(accumulate_scatter(points, n));
}

Point2 to_local(Point2 p, const EllipseGeom& e) {
    const double t = deg2rad(e.phi_deg);
    const double c = std::cos(t), s = std::sin(t);
    const Point2 d = p - e.center;
    return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

double rosin_distance(Point2 p, const EllipseGeom& e) {
    const Point2 l = to_local(p, e);
    const double xp = std::abs(l.x), yp = std::abs(l.y);
    const double ae2 = e.a * e.a, be2 = e.b * e.b;
    const double fe2 = ae2 - be2;
    if (fe2 <= kCircleRelTol * ae2) {
        const double r = 0.5 * (e.a + e.b);
        return std::abs(std::hypot(xp, yp) - r);
    }
    const double X = xp * xp, Y = yp * yp;
    const double s = X + Y + fe2;
    const double delta = std::max(0.0, s * s - 4.0 * fe2 * X);
    // Smaller root of the confocal hyperbola, written to avoid cancellation.
    const double denom = s + std::sqrt(delta);
    const double A = denom > 0.0 ? std::clamp(2.0 * fe2 * X / denom, 0.0, fe2) : 0.0;
    const double bh2 = fe2 - A;
    const double term = A * be2 + ae2 * bh2;
    const double xi = std::sqrt(A * ae2 * (be2 + bh2) / term);
    const double yi = e.b * std::sqrt(std::max(0.0, bh2 * (ae2 - A) / term));
    double best = std::hypot(xp - xi, yp - yi);

    // The hyperbola foot overshoots inside sharp vertices. Two guarded Newton
    // steps on the orthogonality condition move it toward the true foot; any
    // boundary point bounds the distance from above, so keep the smallest.
    double t = std::atan2(yi / e.b, xi / e.a);
    for (int it = 0; it < 2; ++it) {
        const double st = std::sin(t), ct = std::cos(t);
        const double f = fe2 * st * ct - xp * e.a * st + yp * e.b * ct;
        const double fp = fe2 * (ct * ct - st * st) - xp * e.a * ct - yp * e.b * st;
        if (fp == 0.0) break;
        t -= f / fp;
        const double d = std::hypot(xp - e.a * std::cos(t), yp - e.b * std::sin(t));
        if (!(d < best)) break;
        best = d;
    }
    return best;
}

Point2 ellipse_normal(Point2 p, const EllipseGeom& e) {
    const Point2 l = to_local(p, e);
    const Point2 g{l.x / (e.a * e.a), l.y / (e.b * e.b)};
    const double n = norm(g);
    if (!(n > 1e-12 / (e.a * e.a))) throw Error(ErrorCode::AtCenter, "normal undefined at the center");
    const double t = deg2rad(e.phi_deg);
    const double c = std::cos(t), s = std::sin(t);
    return Point2{c * g.x - s * g.y, s * g.x + c * g.y} / n;
}

double perimeter_approx(const EllipseGeom& e) {
    return std::numbers::pi * (1.5 * (e.a + e.b) - std::sqrt(e.a * e.b));
}

Point2 point_at(const EllipseGeom& e, double t_rad) {
    const double u = e.a * std::cos(t_rad), v = e.b * std::sin(t_rad);
    const double t = deg2rad(e.phi_deg);
    const double c = std::cos(t), s = std::sin(t);
    return e.center + Point2{c * u - s * v, s * u + c * v};
}

double parametric_angle(Point2 p, const EllipseGeom& e) {
    const Point2 l = to_local(p, e);
    return wrap_angle(rad2deg(std::atan2(l.y / e.b, l.x / e.a)));
}

bool contains(const EllipseGeom& e, Point2 p) {
    const Point2 l = to_local(p, e);
    const double u = l.x / e.a, v = l.y / e.b;
    return u * u + v * v <= 1.0;
}

std::vector<Point2> sample_boundary(const EllipseGeom& e, double step) {
    // Arc length per unit of t never exceeds a.
    const int n = std::max(8, int(std::ceil(2.0 * std::numbers::pi * e.a / std::max(step, 1e-3))));
    std::vector<Point2> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(point_at(e, 2.0 * std::numbers::pi * i / n));
    return out;
}

}  // namespace elldet
