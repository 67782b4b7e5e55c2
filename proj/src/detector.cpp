#include "elldet/detector.hpp"

#include <chrono>

#include "elldet/error.hpp"

namespace elldet {

const char* to_string(PolarityMode m) {
    switch (m) {
    case PolarityMode::All: return "all";
    case PolarityMode::Positive: return "positive";
    case PolarityMode::Negative: return "negative";
    }
    return "all";
}

PolarityMode parse_polarity_mode(const std::string& s) {
    if (s == "all") return PolarityMode::All;
    if (s == "positive") return PolarityMode::Positive;
    if (s == "negative") return PolarityMode::Negative;
    throw Error(ErrorCode::InvalidArgument, "polarity must be all, positive or negative");
}

EllipseGeom to_input_frame(const EllipseGeom& e, double scale) {
    return EllipseGeom::make((e.center + Point2{0.5, 0.5}) / scale, e.a / scale, e.b / scale, e.phi_deg, e.polarity);
}

EllipseGeom to_work_frame(const EllipseGeom& e, double scale) {
    return EllipseGeom::make(e.center * scale - Point2{0.5, 0.5}, e.a * scale, e.b * scale, e.phi_deg, e.polarity);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

DetectionTrace detect_traced(const GrayImage& img, const Config& cfg) {
    DetectionTrace tr;
    PipelineStats& st = tr.result.stats;
    const auto t_start = Clock::now();

    auto t0 = Clock::now();
    tr.extraction = extract_arc_support_ls(img, cfg);
    for (const auto& s : tr.extraction.segments) {
        if (cfg.polarity_mode == PolarityMode::Positive && s.polarity != 1) continue;
        if (cfg.polarity_mode == PolarityMode::Negative && s.polarity != -1) continue;
        tr.segments.push_back(s);
    }
    st.ms_extract = ms_since(t0);
    st.n_ls = int(tr.segments.size());

    const GradientMap& g = tr.extraction.gradient;
    t0 = Clock::now();
    GroupingParams gp;
    gp.alpha = cfg.alpha;
    gp.window_side = cfg.window_side_factor * cfg.epsilon;
    gp.window_offset = cfg.window_offset_factor * cfg.epsilon;
    tr.groups = link_groups(tr.segments, tr.extraction.region_label, g.width, g.height, gp);
    st.ms_group = ms_since(t0);
    st.n_groups = int(tr.groups.size());

    t0 = Clock::now();
    CandidateContext ctx{tr.segments, tr.extraction.regions, &g, Normalization::for_image(g.width, g.height)};
    tr.initial = generate_initial_set(tr.groups, ctx, cfg);
    st.ms_initial = ms_since(t0);
    st.n_init = int(tr.initial.size());

    t0 = Clock::now();
    tr.candidates = hierarchical_cluster(tr.initial, ClusterParams::from_config(cfg, g.width, g.height));
    st.ms_cluster = ms_since(t0);
    st.n_candidates = tr.candidates.total;
    st.count_identity = tr.candidates.count_identity();

    t0 = Clock::now();
    tr.work_detections = verify_candidates(tr.candidates, g, cfg);
    st.ms_verify = ms_since(t0);

    for (const auto& d : tr.work_detections) {
        Detection out = d;
        out.geom = to_input_frame(d.geom, cfg.scale);
        tr.result.detections.push_back(out);
    }
    st.n_detections = int(tr.result.detections.size());
    st.ms_total = ms_since(t_start);
    return tr;
}

DetectionResult detect(const GrayImage& img, const Config& cfg) { return detect_traced(img, cfg).result; }

}  // namespace elldet
