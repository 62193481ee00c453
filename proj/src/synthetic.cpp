#include "facepipe/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "facepipe/error.hpp"

namespace facepipe {

namespace {

constexpr double kBackgroundAge = 35.0;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

Expression sample_confused(Expression truth, const RecognizerModel& model, Rng& rng) {
    if (!model.expression_confusion)
        return truth;
    const auto& row = (*model.expression_confusion)[static_cast<std::size_t>(truth)];
    const double u = rng.uniform01();
    double acc = 0.0;
    for (int i = 0; i < kExpressionCount; ++i) {
        acc += row[static_cast<std::size_t>(i)];
        if (u < acc)
            return static_cast<Expression>(i);
    }
    return static_cast<Expression>(kExpressionCount - 1);
}

} // namespace

std::vector<GroundTruthFace> ground_truth_at(const Scenario& s, Timestamp ts) {
    if (ts < 0 || ts > s.duration)
        throw InvalidInput("ground truth timestamp outside [0, duration]");
    std::vector<GroundTruthFace> out;
    for (const ActorSpec& a : s.actors) {
        if (!a.active_at(ts))
            continue;
        const Vec2 tl = a.path.topleft_at(ts);
        BBox box{tl.x, tl.y, a.box_w, a.box_h};
        box = clamp_to_frame(box, s.frame_width, s.frame_height);
        out.push_back({a.actor_id, box, a.true_age, a.true_gender, a.expression_at(ts)});
    }
    std::sort(out.begin(), out.end(),
              [](const GroundTruthFace& a, const GroundTruthFace& b) {
                  return a.actor_id < b.actor_id;
              });
    return out;
}

SynthDetections synth_detect(const std::vector<GroundTruthFace>& truth,
                             const DetectorModel& model, double frame_w, double frame_h,
                             Rng& rng) {
    SynthDetections out;
    out.latency_us = ms_to_us(model.latency.sample_ms(rng));

    for (const GroundTruthFace& face : truth) {
        if (rng.bernoulli(model.miss_prob))
            continue;
        const Vec2 c = centroid(face.box);
        const double cx = c.x + rng.normal(0.0, model.center_jitter_sigma_px);
        const double cy = c.y + rng.normal(0.0, model.center_jitter_sigma_px);
        double w = face.box.w + rng.normal(0.0, model.size_jitter_sigma_px);
        double h = face.box.h + rng.normal(0.0, model.size_jitter_sigma_px);
        w = std::clamp(w, 2.0, frame_w);
        h = std::clamp(h, 2.0, frame_h);
        BBox box{cx - w / 2.0, cy - h / 2.0, w, h};
        box = clamp_to_frame(box, frame_w, frame_h);
        const double conf =
            clamp01(rng.normal(model.confidence_true.mean, model.confidence_true.sigma));
        out.detections.push_back({box, conf});
        out.source_actor.push_back(face.actor_id);
    }

    const int n_fp = rng.poisson(model.false_positive_rate);
    for (int i = 0; i < n_fp; ++i) {
        const double w = rng.uniform(0.10, 0.30) * frame_w;
        const double h = rng.uniform(0.10, 0.30) * frame_h;
        const double x = rng.uniform(0.0, frame_w - w);
        const double y = rng.uniform(0.0, frame_h - h);
        const double conf =
            clamp01(rng.normal(model.confidence_false.mean, model.confidence_false.sigma));
        out.detections.push_back({BBox{x, y, w, h}, conf});
        out.source_actor.push_back(std::nullopt);
    }
    return out;
}

SynthRecognition synth_recognize(const std::optional<GroundTruthFace>& truth,
                                 const TaskSet& tasks, const RecognizerModel& model, Rng& rng) {
    if (tasks.empty())
        throw InvalidInput("synth_recognize: task set is empty");

    SynthRecognition out;
    double latency_ms = 0.0;
    if (tasks.age)
        latency_ms += model.age_latency.sample_ms(rng);
    if (tasks.gender)
        latency_ms += model.gender_latency.sample_ms(rng);
    if (tasks.expression)
        latency_ms += model.expression_latency.sample_ms(rng);
    out.latency_us = ms_to_us(latency_ms);

    if (!truth) {
        // Background crop: nothing real behind it, so the reading is a
        // fixed neutral value with no random draws.
        if (tasks.age)
            out.measurement.age_years = kBackgroundAge;
        if (tasks.gender)
            out.measurement.gender_p_female = 0.5;
        if (tasks.expression)
            out.measurement.expression = ExpressionDist::uniform();
        return out;
    }

    if (tasks.age)
        out.measurement.age_years = truth->true_age + rng.normal(0.0, model.age_noise_sigma);
    if (tasks.gender) {
        const bool flipped = rng.bernoulli(model.gender_flip_prob);
        const bool says_female = (truth->true_gender == Gender::female) != flipped;
        out.measurement.gender_p_female = says_female ? 0.95 : 0.05;
    }
    if (tasks.expression) {
        const Expression sampled = sample_confused(truth->true_expression, model, rng);
        out.measurement.expression = ExpressionDist::one_hot_smoothed(sampled);
    }
    return out;
}

SynthLandmarks synth_landmarks(const BBox& face_box, const FaceTemplate& tmpl,
                               const LandmarkModel& model, Rng& rng) {
    if (!tmpl.valid())
        throw InvalidInput("synth_landmarks: invalid template");
    if (!face_box.valid())
        throw InvalidInput("synth_landmarks: degenerate face box");

    SynthLandmarks out;
    out.generating.scale = face_box.w; // template lives in the unit square
    out.generating.rotation = rng.uniform(-model.max_rotation_rad, model.max_rotation_rad);
    const Vec2 center = centroid(face_box);
    const Vec2 mapped_centroid = out.generating.apply(tmpl.centroid()); // translation still zero
    out.generating.translation = center - mapped_centroid;

    out.points.reserve(tmpl.points.size());
    for (const Vec2& p : tmpl.points) {
        Vec2 q = out.generating.apply(p);
        q.x += rng.normal(0.0, model.noise_sigma_px);
        q.y += rng.normal(0.0, model.noise_sigma_px);
        out.points.push_back(q);
    }
    return out;
}

} // namespace facepipe
