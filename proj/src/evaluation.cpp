#include "facepipe/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "facepipe/error.hpp"
#include "facepipe/synthetic.hpp"

namespace facepipe {

using nlohmann::json;
using nlohmann::ordered_json;

double average_precision(const std::vector<std::vector<ScoredBox>>& detections_per_frame,
                         const std::vector<std::vector<BBox>>& ground_truth_per_frame,
                         double iou_threshold) {
    if (!(iou_threshold > 0.0) || iou_threshold > 1.0)
        throw InvalidInput("iou threshold must be in (0,1]");
    if (detections_per_frame.size() != ground_truth_per_frame.size())
        throw InvalidInput("detections and ground truth must cover the same frames");

    std::size_t n_gt = 0;
    for (const auto& g : ground_truth_per_frame)
        n_gt += g.size();

    struct Pooled {
        double confidence;
        std::size_t frame;
        std::size_t index;
    };
    std::vector<Pooled> pool;
    for (std::size_t f = 0; f < detections_per_frame.size(); ++f)
        for (std::size_t i = 0; i < detections_per_frame[f].size(); ++i)
            pool.push_back({detections_per_frame[f][i].confidence, f, i});

    if (n_gt == 0)
        return pool.empty() ? 1.0 : 0.0;
    if (pool.empty())
        return 0.0;

    std::sort(pool.begin(), pool.end(), [](const Pooled& a, const Pooled& b) {
        if (a.confidence != b.confidence)
            return a.confidence > b.confidence;
        if (a.frame != b.frame)
            return a.frame < b.frame;
        return a.index < b.index;
    });

    std::vector<std::vector<bool>> gt_used(ground_truth_per_frame.size());
    for (std::size_t f = 0; f < ground_truth_per_frame.size(); ++f)
        gt_used[f].assign(ground_truth_per_frame[f].size(), false);

    std::vector<double> precision, recall;
    std::size_t tp = 0, fp = 0;
    for (const Pooled& d : pool) {
        const BBox& box = detections_per_frame[d.frame][d.index].box;
        const auto& gts = ground_truth_per_frame[d.frame];
        double best_iou = 0.0;
        std::size_t best = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (gt_used[d.frame][g])
                continue;
            const double v = iou(box, gts[g]);
            if (v >= iou_threshold && v > best_iou) {
                best_iou = v;
                best = g;
            }
        }
        if (best < gts.size()) {
            gt_used[d.frame][best] = true;
            ++tp;
        } else {
            ++fp;
        }
        precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
        recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
    }

    // Precision envelope, integrated over recall steps.
    std::vector<double> envelope(precision.size());
    double running = 0.0;
    for (std::size_t i = precision.size(); i-- > 0;) {
        running = std::max(running, precision[i]);
        envelope[i] = running;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < recall.size(); ++i) {
        ap += (recall[i] - prev_recall) * envelope[i];
        prev_recall = recall[i];
    }
    return ap;
}

double age_mae(std::span<const double> predicted, std::span<const double> truth) {
    if (predicted.size() != truth.size())
        throw InvalidInput("age_mae: size mismatch");
    if (predicted.empty())
        throw InvalidInput("age_mae: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        sum += std::abs(predicted[i] - truth[i]);
    return sum / static_cast<double>(predicted.size());
}

double classification_accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size())
        throw InvalidInput("classification_accuracy: size mismatch");
    if (predicted.empty())
        throw InvalidInput("classification_accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i])
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

namespace {

struct TrackBox {
    std::int64_t track_id;
    BBox box;
};

std::vector<TrackBox> track_boxes_of(const TraceEvent& e) {
    std::vector<TrackBox> out;
    for (const char* key : {"matched", "new"}) {
        auto it = e.payload.find(key);
        if (it == e.payload.end())
            continue;
        for (const auto& entry : *it)
            out.push_back({entry.at("track_id").get<std::int64_t>(),
                           box_from_json(entry.at("box"))});
    }
    return out;
}

Timestamp frame_ts_of(const TraceEvent& e) {
    auto it = e.payload.find("frame_ts");
    if (it == e.payload.end() || !it->is_number_integer())
        throw InvalidInput("trace: event lacks frame_ts");
    return it->get<Timestamp>();
}

} // namespace

std::int64_t identity_switches(const std::vector<TraceEvent>& trace, const Scenario& scenario) {
    std::map<std::int64_t, std::int64_t> assigned; // actor -> track
    std::int64_t switches = 0;
    for (const TraceEvent& e : trace) {
        if (e.kind != TraceKind::track_update)
            continue;
        const Timestamp ts = frame_ts_of(e);
        if (ts < 0 || ts > scenario.duration)
            throw InvalidInput("trace frame_ts outside scenario duration");
        const auto truth = ground_truth_at(scenario, ts);
        const auto boxes = track_boxes_of(e);
        for (const GroundTruthFace& actor : truth) {
            double best_iou = 0.0;
            std::int64_t best_track = -1;
            for (const TrackBox& tb : boxes) {
                const double v = iou(tb.box, actor.box);
                if (v > best_iou || (v == best_iou && v > 0.0 && tb.track_id < best_track)) {
                    best_iou = v;
                    best_track = tb.track_id;
                }
            }
            if (best_track < 0)
                continue; // no overlap this frame; assignment unchanged
            auto it = assigned.find(actor.actor_id);
            if (it != assigned.end() && it->second != best_track)
                ++switches;
            assigned[actor.actor_id] = best_track;
        }
    }
    return switches;
}

TimingStats timing_stats(const std::vector<TraceEvent>& trace) {
    if (trace.empty())
        throw InvalidInput("timing_stats: empty trace");
    TimingStats out;
    std::vector<Timestamp> tick_ts;
    std::vector<Timestamp> staleness;
    for (const TraceEvent& e : trace) {
        switch (e.kind) {
        case TraceKind::tick: {
            tick_ts.push_back(e.ts);
            auto it = e.payload.find("tracks");
            if (it != e.payload.end())
                for (const auto& t : *it) {
                    const auto& s = t.at("staleness_us");
                    if (!s.is_null())
                        staleness.push_back(s.get<Timestamp>());
                }
            break;
        }
        case TraceKind::evict:
            if (e.payload.value("dropped", false))
                ++out.drop_count;
            break;
        default:
            break;
        }
    }
    out.ticks = static_cast<std::int64_t>(tick_ts.size());
    if (tick_ts.size() >= 2) {
        const double span_us = static_cast<double>(tick_ts.back() - tick_ts.front());
        if (span_us > 0.0)
            out.achieved_fps = static_cast<double>(tick_ts.size() - 1) * 1e6 / span_us;
    }
    if (!staleness.empty()) {
        double sum = 0.0;
        for (Timestamp s : staleness)
            sum += static_cast<double>(s);
        out.staleness_mean_ms = sum / static_cast<double>(staleness.size()) / 1000.0;
        std::sort(staleness.begin(), staleness.end());
        const std::size_t rank = (staleness.size() * 95 + 99) / 100; // ceil(0.95 n), >= 1
        out.staleness_p95_ms = us_to_ms(staleness[std::min(staleness.size() - 1, rank - 1)]);
    }
    return out;
}

EvalReport evaluate(const std::vector<TraceEvent>& trace, const Scenario& scenario) {
    std::vector<std::vector<ScoredBox>> dets;
    std::vector<std::vector<BBox>> gts;
    std::vector<double> age_pred, age_truth;
    std::vector<int> gender_pred, gender_truth;
    std::vector<int> expr_pred, expr_truth;

    for (const TraceEvent& e : trace) {
        if (e.kind == TraceKind::detect_done) {
            const Timestamp ts = frame_ts_of(e);
            if (ts < 0 || ts > scenario.duration)
                throw InvalidInput("trace frame_ts outside scenario duration");
            std::vector<ScoredBox> frame_dets;
            for (const auto& d : e.payload.at("detections"))
                frame_dets.push_back(
                    {box_from_json(d.at("box")), d.at("confidence").get<double>()});
            std::vector<BBox> frame_gt;
            for (const GroundTruthFace& g : ground_truth_at(scenario, ts))
                frame_gt.push_back(g.box);
            dets.push_back(std::move(frame_dets));
            gts.push_back(std::move(frame_gt));
        } else if (e.kind == TraceKind::recognize_done) {
            const Timestamp ts = frame_ts_of(e);
            if (ts < 0 || ts > scenario.duration)
                throw InvalidInput("trace frame_ts outside scenario duration");
            const auto truth = ground_truth_at(scenario, ts);
            for (const auto& face : e.payload.at("faces")) {
                const BBox box = box_from_json(face.at("box"));
                const GroundTruthFace* actor = nullptr;
                double best = 0.0;
                for (const GroundTruthFace& g : truth) {
                    const double v = iou(box, g.box);
                    if (v > best) {
                        best = v;
                        actor = &g;
                    }
                }
                if (!actor)
                    continue; // background crop; nothing to score against
                if (face.contains("age")) {
                    age_pred.push_back(face.at("age").get<double>());
                    age_truth.push_back(actor->true_age);
                }
                if (face.contains("gender_p")) {
                    gender_pred.push_back(
                        static_cast<int>(gender_label(face.at("gender_p").get<double>())));
                    gender_truth.push_back(static_cast<int>(actor->true_gender));
                }
                if (face.contains("expression")) {
                    const auto cls =
                        expression_from_string(face.at("expression").get<std::string>());
                    if (!cls)
                        throw InvalidInput("trace: unknown expression label");
                    expr_pred.push_back(static_cast<int>(*cls));
                    expr_truth.push_back(static_cast<int>(actor->true_expression));
                }
            }
        }
    }

    EvalReport r;
    r.detection_frames = static_cast<std::int64_t>(dets.size());
    r.detection_ap = average_precision(dets, gts, 0.5);
    r.age_samples = static_cast<std::int64_t>(age_pred.size());
    r.age_mae_years = age_pred.empty() ? 0.0 : age_mae(age_pred, age_truth);
    r.gender_samples = static_cast<std::int64_t>(gender_pred.size());
    r.gender_accuracy =
        gender_pred.empty() ? 0.0 : classification_accuracy(gender_pred, gender_truth);
    r.expression_samples = static_cast<std::int64_t>(expr_pred.size());
    r.expression_accuracy =
        expr_pred.empty() ? 0.0 : classification_accuracy(expr_pred, expr_truth);
    r.identity_switches = facepipe::identity_switches(trace, scenario);
    if (!trace.empty()) {
        const TimingStats t = timing_stats(trace);
        r.achieved_fps = t.achieved_fps;
        r.staleness_mean_ms = t.staleness_mean_ms;
        r.staleness_p95_ms = t.staleness_p95_ms;
        r.drop_count = t.drop_count;
    }
    return r;
}

ordered_json EvalReport::to_json() const {
    ordered_json j;
    j["detection_ap"] = detection_ap;
    j["age_mae_years"] = age_mae_years;
    j["gender_accuracy"] = gender_accuracy;
    j["expression_accuracy"] = expression_accuracy;
    j["identity_switches"] = identity_switches;
    j["achieved_fps"] = achieved_fps;
    j["staleness_mean_ms"] = staleness_mean_ms;
    j["staleness_p95_ms"] = staleness_p95_ms;
    j["drop_count"] = drop_count;
    j["samples"] = {{"detection_frames", detection_frames},
                    {"age", age_samples},
                    {"gender", gender_samples},
                    {"expression", expression_samples}};
    return j;
}

std::string EvalReport::to_csv() const {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out << "stage,metric\n";
    out.precision(1);
    out << "Detection,\"" << detection_ap * 100.0 << "% (AP @0.5IoU)\"\n";
    out.precision(2);
    out << "Age,\"" << age_mae_years << " years (MAE)\"\n";
    out.precision(1);
    out << "Gender,\"" << gender_accuracy * 100.0 << "% (accuracy)\"\n";
    out << "Expression,\"" << expression_accuracy * 100.0 << "% (accuracy)\"\n";
    return out.str();
}

} // namespace facepipe
