#include "elldet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "elldet/detector.hpp"
#include "elldet/error.hpp"
#include "elldet/render.hpp"

namespace elldet {

double overlap_ratio(const EllipseGeom& e1, const EllipseGeom& e2, int width, int height) {
    const auto m1 = rasterize_ellipse(e1, width, height);
    const auto m2 = rasterize_ellipse(e2, width, height);
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < m1.size(); ++i) {
        inter += m1[i] & m2[i];
        uni += m1[i] | m2[i];
    }
    if (uni == 0) {
        const bool same = e1.center == e2.center && e1.a == e2.a && e1.b == e2.b && e1.phi_deg == e2.phi_deg;
        return same ? 1.0 : 0.0;
    }
    return double(inter) / double(uni);
}

ImageMatch match_image(const EvalImage& img, double d0) {
    ImageMatch m;
    m.name = img.name;
    const int nd = int(img.detections.size()), nt = int(img.truth.size());
    m.det_to_truth.assign(nd, -1);
    m.overlap.assign(nd, 0.0);

    struct Pair {
        double ov;
        int d, t;
    };
    std::vector<Pair> pairs;
    for (int d = 0; d < nd; ++d)
        for (int t = 0; t < nt; ++t) {
            const double ov = overlap_ratio(img.detections[d], img.truth[t], img.width, img.height);
            if (ov > d0) pairs.push_back({ov, d, t});
        }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.ov != b.ov) return a.ov > b.ov;
        return a.d != b.d ? a.d < b.d : a.t < b.t;
    });
    std::vector<char> truth_used(nt, 0);
    for (const Pair& p : pairs) {
        if (m.det_to_truth[p.d] >= 0 || truth_used[p.t]) continue;
        m.det_to_truth[p.d] = p.t;
        m.overlap[p.d] = p.ov;
        truth_used[p.t] = 1;
        ++m.tp;
    }
    m.fp = nd - m.tp;
    m.fn = nt - m.tp;
    return m;
}

EvalReport evaluate(std::span<const EvalImage> images, double d0) {
    EvalReport r;
    r.d0 = d0;
    double ov_sum = 0.0;
    for (const auto& img : images) {
        ImageMatch m = match_image(img, d0);
        r.tp += m.tp;
        r.fp += m.fp;
        r.fn += m.fn;
        for (std::size_t i = 0; i < m.overlap.size(); ++i)
            if (m.det_to_truth[i] >= 0) ov_sum += m.overlap[i];
        r.images.push_back(std::move(m));
    }
    r.precision = r.tp + r.fp > 0 ? double(r.tp) / (r.tp + r.fp) : 0.0;
    r.recall = r.tp + r.fn > 0 ? double(r.tp) / (r.tp + r.fn) : 0.0;
    r.f_measure = r.precision > 0.0 && r.recall > 0.0 ? 2.0 / (1.0 / r.precision + 1.0 / r.recall) : 0.0;
    r.mor = r.tp > 0 ? ov_sum / r.tp : 0.0;
    return r;
}

const char* to_string(Sweep s) {
    switch (s) {
    case Sweep::SizeRatio: return "size_ratio";
    case Sweep::OrientationRatio: return "orientation_ratio";
    case Sweep::CoverageRatio: return "coverage_ratio";
    }
    return "size_ratio";
}

Sweep parse_sweep(const std::string& s) {
    if (s == "size_ratio") return Sweep::SizeRatio;
    if (s == "orientation_ratio") return Sweep::OrientationRatio;
    if (s == "coverage_ratio") return Sweep::CoverageRatio;
    throw Error(ErrorCode::InvalidArgument, "sweep must be size_ratio, orientation_ratio or coverage_ratio");
}

namespace {

// Grid values first + k * step for k in [0, count); subsampling by n keeps k = n-1, 2n-1, ...
std::vector<double> axis(double first, double step, int count, int n) {
    std::vector<double> v;
    for (int k = 0; k < count; ++k)
        if (k % n == n - 1) v.push_back(first + k * step);
    return v;
}

std::string fmt(const char* pattern, double a, double b) {
    char buf[96];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

}  // namespace

std::vector<SyntheticItem> sweep_items(const SweepSpec& spec) {
    if (spec.subsample < 1) throw Error(ErrorCode::InvalidArgument, "subsample must be >= 1");
    std::vector<SyntheticItem> items;
    const Point2 c{0.5 * spec.size, 0.5 * spec.size};
    const auto ratios = axis(0.01, 0.01, 100, spec.subsample);
    switch (spec.kind) {
    case Sweep::SizeRatio:
        for (double a : axis(1.0, 1.0, 100, spec.subsample))
            for (double r : ratios)
                items.push_back({fmt("size_a%03.0f_r%.2f", a, r), EllipseGeom::make(c, a, a * r, 0.0), 360.0});
        break;
    case Sweep::OrientationRatio:
        for (double phi : axis(-88.0, 2.0, 90, spec.subsample))
            for (double r : ratios)
                items.push_back({fmt("orient_p%+04.0f_r%.2f", phi, r), EllipseGeom::make(c, 100.0, 100.0 * r, phi),
                                 360.0});
        break;
    case Sweep::CoverageRatio:
        for (double cov : axis(3.0, 3.0, 120, spec.subsample))
            for (double r : ratios)
                items.push_back({fmt("cover_c%03.0f_r%.2f", cov, r), EllipseGeom::make(c, 100.0, 100.0 * r, 0.0), cov});
        break;
    }
    return items;
}

GrayImage render_item(const SyntheticItem& item, const SweepSpec& spec) {
    const double bg = spec.invert ? spec.foreground : spec.background;
    const double fg = spec.invert ? spec.background : spec.foreground;
    GrayImage img(spec.size, spec.size, bg);
    paint_ellipse(img, item.truth, fg, item.coverage_deg);
    return img;
}

void write_ground_truth(const std::string& path, std::span<const SyntheticItem> items) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << "cx,cy,a,b,phi_deg,coverage_deg\n";
    char buf[160];
    for (const auto& it : items) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", it.truth.center.x, it.truth.center.y,
                      it.truth.a, it.truth.b, it.truth.phi_deg, it.coverage_deg);
        out << buf;
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

std::vector<SyntheticItem> read_ground_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<SyntheticItem> items;
    std::string line;
    std::getline(in, line);  // header
    const std::string stem = std::filesystem::path(path).stem().string();
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        try {
            while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw Error(ErrorCode::CorruptFile, "bad ground-truth row in " + path);
        }
        if (v.size() < 5) throw Error(ErrorCode::CorruptFile, "ground-truth row needs cx,cy,a,b,phi_deg");
        SyntheticItem it{stem, EllipseGeom::make({v[0], v[1]}, v[2], v[3], v[4]), v.size() > 5 ? v[5] : 360.0};
        items.push_back(it);
    }
    return items;
}

std::vector<SyntheticItem> generate_synthetic(const SweepSpec& spec, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir);
    const auto items = sweep_items(spec);
    for (const auto& it : items) {
        const auto base = (std::filesystem::path(out_dir) / it.name).string();
        save_pgm(render_item(it, spec), base + ".pgm");
        write_ground_truth(base + ".csv", std::span<const SyntheticItem>(&it, 1));
    }
    return items;
}

double loglog_slope(std::span<const TimingSample> samples) {
    std::set<long> sizes;
    for (const auto& s : samples) sizes.insert(s.pixels);
    if (sizes.size() < 4 || *sizes.begin() <= 0 || double(*sizes.rbegin()) < 16.0 * double(*sizes.begin()))
        throw Error(ErrorCode::InsufficientSamples, "need four sizes spanning a 16x pixel range");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(samples.size());
    for (const auto& s : samples) {
        const double x = std::log(double(s.pixels)), y = std::log(std::max(s.ms, 1e-6));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TimingResult timing_sweep(std::span<const GrayImage> images, const Config& cfg, int repeats) {
    TimingResult r;
    for (const auto& img : images) {
        std::vector<double> t;
        for (int i = 0; i < std::max(1, repeats); ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            (void)detect(img, cfg);
            t.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
        }
        std::sort(t.begin(), t.end());
        r.samples.push_back({long(img.width) * img.height, t[t.size() / 2]});
    }
    r.slope = loglog_slope(r.samples);
    return r;
}

GrayImage timing_scene(int side) {
    const double s = side / 256.0;
    GrayImage img(side, side, 200.0);
    paint_bar(img, Point2{60, 200} * s, 150 * s, 10 * s, 20.0, 90.0);
    paint_bar(img, Point2{200, 40} * s, 90 * s, 8 * s, 100.0, 60.0);
    paint_ellipse(img, EllipseGeom::make(Point2{80, 90} * s, 55 * s, 35 * s, 25.0), 50.0);
    paint_ellipse(img, EllipseGeom::make(Point2{185, 150} * s, 45 * s, 30 * s, 120.0), 240.0);
    paint_ellipse(img, EllipseGeom::make(Point2{150, 225} * s, 22 * s, 22 * s, 0.0), 30.0);
    return img;
}

}  // namespace elldet
