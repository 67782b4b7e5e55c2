#include "elldet/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "elldet/error.hpp"
#include "elldet/render.hpp"

namespace elldet {

using nlohmann::json;

namespace {

json to_json(const Detection& d) {
    return {{"cx", d.geom.center.x},   {"cy", d.geom.center.y},      {"a", d.geom.a},
            {"b", d.geom.b},           {"phi_deg", d.geom.phi_deg},  {"polarity", d.geom.polarity},
            {"goodness", d.goodness},  {"inliers", d.inlier_count},  {"coverage_deg", d.coverage_deg}};
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + p.string());
}

std::string line(const char* pattern, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

}  // namespace

std::string detections_json(std::span<const Detection> dets) {
    json arr = json::array();
    for (const auto& d : dets) arr.push_back(to_json(d));
    return arr.dump(2) + "\n";
}

std::string detections_csv(std::span<const Detection> dets) {
    std::string s = "cx,cy,a,b,phi_deg,polarity,goodness,inliers,coverage_deg\n";
    for (const auto& d : dets)
        s += line("%.6f,%.6f,%.6f,%.6f,%.6f,%d,%.6f,%d,%.6f\n", d.geom.center.x, d.geom.center.y, d.geom.a, d.geom.b,
                  d.geom.phi_deg, d.geom.polarity, d.goodness, d.inlier_count, d.coverage_deg);
    return s;
}

RgbImage overlay(const GrayImage& img, std::span<const Detection> dets, std::uint8_t r, std::uint8_t g,
                 std::uint8_t b) {
    RgbImage out = to_rgb(img);
    for (const auto& d : dets) draw_ellipse(out, d.geom, r, g, b);
    return out;
}

std::string stats_json(const PipelineStats& st) {
    json j = {{"n_ls", st.n_ls},
              {"n_groups", st.n_groups},
              {"n_init", st.n_init},
              {"n_candidates", st.n_candidates},
              {"n_detections", st.n_detections},
              {"count_identity", st.count_identity},
              {"ms_extract", st.ms_extract},
              {"ms_group", st.ms_group},
              {"ms_initial", st.ms_initial},
              {"ms_cluster", st.ms_cluster},
              {"ms_verify", st.ms_verify},
              {"ms_total", st.ms_total}};
    return j.dump(2) + "\n";
}

void dump_stages(const DetectionTrace& tr, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir);
    const fs::path root(dir);

    std::string ls;
    for (const auto& s : tr.segments)
        ls += line("%.3f %.3f %.3f %.3f %d %.6f %.6f %d\n", s.start.x, s.start.y, s.end.x, s.end.y, s.polarity,
                   s.arc_direction.x, s.arc_direction.y, s.region_id);
    write_text(root / "ls.txt", ls);

    std::string groups;
    for (const auto& g : tr.groups) {
        for (int m : g.members) groups += std::to_string(m) + " ";
        groups += line("%.6f\n", g.saliency);
    }
    write_text(root / "groups.txt", groups);

    std::string init;
    for (const auto& e : tr.initial)
        init += line("%d %d %.4f %.4f %.4f %.4f %.4f %d %d\n", e.group_a, e.group_b, e.geom.center.x, e.geom.center.y,
                     e.geom.a, e.geom.b, e.geom.phi_deg, e.geom.polarity, e.inlier_count);
    write_text(root / "initial.txt", init);

    std::string cands;
    for (const auto& e : tr.candidates.candidates)
        cands += line("%.4f %.4f %.4f %.4f %.4f %d\n", e.center.x, e.center.y, e.a, e.b, e.phi_deg, e.polarity);
    write_text(root / "candidates.txt", cands);

    write_text(root / "stats.json", stats_json(tr.result.stats));
}

std::string eval_report_json(const EvalReport& r) {
    json images = json::array();
    for (const auto& m : r.images)
        images.push_back({{"name", m.name},
                          {"det_to_truth", m.det_to_truth},
                          {"overlap", m.overlap},
                          {"tp", m.tp},
                          {"fp", m.fp},
                          {"fn", m.fn}});
    json j = {{"precision", r.precision}, {"recall", r.recall}, {"f_measure", r.f_measure},
              {"mor", r.mor},             {"d0", r.d0},         {"tp", r.tp},
              {"fp", r.fp},               {"fn", r.fn},         {"images", images}};
    return j.dump(2) + "\n";
}

}  // namespace elldet
