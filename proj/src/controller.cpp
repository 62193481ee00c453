#include "controller.hpp"

#include <algorithm>
#include <cmath>

#include "facepipe/error.hpp"
#include "facepipe/evaluation.hpp"

namespace facepipe::detail {

using nlohmann::ordered_json;

Timestamp schedule_at(std::int64_t index, double rate_hz) {
    return static_cast<Timestamp>(
        std::llround(static_cast<double>(index) * 1e6 / rate_hz));
}

ResolvedConfig resolve(const Scenario& scenario, const PipelineConfig& config) {
    config.validate();
    ResolvedConfig rc;
    rc.frame_rate = config.frame_rate.value_or(scenario.frame_rate);
    rc.visualization_rate = config.visualization_rate;
    rc.buffer_capacity = config.buffer_capacity;
    rc.tracker = config.tracker;
    rc.cadence = config.cadence ? *config.cadence : scenario.cadence.value_or(CadencePolicy{});
    rc.aggregation_window = config.aggregation_window;
    rc.seed = config.seed_override.value_or(scenario.seed);
    rc.face_template = config.face_template ? *config.face_template : FaceTemplate::canonical68();
    if (rc.frame_rate <= 0.0)
        throw ConfigError("frame rate must be > 0");
    if (!rc.cadence.valid())
        throw ConfigError("cadence periods must be >= 1");
    if (!rc.face_template.valid())
        throw ConfigError("face template needs >= 2 distinct points");
    return rc;
}

DetectionOutcome perform_detection(const Scenario& s, const ResolvedConfig& rc,
                                   const DetectionJob& job) {
    Rng rng = Rng::stream(rc.seed, static_cast<std::uint64_t>(job.frame_id), Stage::detection);
    const auto truth = ground_truth_at(s, std::clamp<Timestamp>(job.frame_ts, 0, s.duration));
    SynthDetections d = synth_detect(truth, s.detector, s.frame_width, s.frame_height, rng);
    return {std::move(d.detections), std::move(d.source_actor), d.latency_us};
}

RecognitionOutcome perform_recognition(const Scenario& s, const ResolvedConfig& rc,
                                       const RecognitionJob& job) {
    Rng rng = Rng::stream(rc.seed, static_cast<std::uint64_t>(job.frame_id), Stage::recognition);
    RecognitionOutcome out;
    for (const RecognitionFaceJob& face : job.faces) {
        FaceOutcome fo;
        fo.track_id = face.track_id;
        fo.det_index = face.det_index;
        fo.box = face.box;

        const SynthLandmarks lm = synth_landmarks(face.box, rc.face_template, s.landmarks, rng);
        fo.generating = lm.generating;
        fo.estimated = estimate_similarity(rc.face_template.points, lm.points);
        fo.residual = alignment_residual(rc.face_template.points, lm.points, fo.estimated);

        // Cadences whose periods share no common cycle can leave a cycle
        // with nothing to run; the pass still counts.
        fo.tasks = tasks_for(rc.cadence, face.cycle_index);
        if (!fo.tasks.empty()) {
            SynthRecognition sr = synth_recognize(face.truth, fo.tasks, s.recognizer, rng);
            fo.measurement = sr.measurement;
            fo.latency_us = sr.latency_us;
            out.total_latency_us += sr.latency_us;
        }
        out.faces.push_back(std::move(fo));
    }
    return out;
}

Controller::Controller(const Scenario& scenario, const ResolvedConfig& rc)
    : scenario_(scenario),
      rc_(rc),
      store_(rc.buffer_capacity),
      registry_(rc.tracker, scenario.frame_width, scenario.frame_height,
                rc.aggregation_window) {}

void Controller::emit(Timestamp ts, TraceKind kind, ordered_json payload) {
    trace_.push_back(TraceEvent{ts, kind, std::move(payload)});
}

Controller::Dispatch Controller::on_grab(Timestamp now, Frame frame) {
    const std::int64_t id = frame.id;
    ++frames_grabbed_;
    emit(now, TraceKind::grab, {{"frame_id", id}});
    if (auto evicted = store_.push(std::move(frame))) {
        emit(now, TraceKind::evict,
             {{"frame_id", evicted->frame.id},
              {"detected", evicted->frame.meta.detection_done},
              {"dropped", evicted->dropped_unprocessed}});
        assignments_.erase(evicted->frame.id);
    }
    return try_dispatch(now);
}

Controller::Dispatch Controller::try_dispatch(Timestamp now) {
    Dispatch d;
    if (!detection_busy_) {
        if (auto frame = store_.checkout(Stage::detection)) {
            detection_busy_ = true;
            emit(now, TraceKind::checkout,
                 {{"stage", "detection"}, {"frame_id", frame->id}});
            d.detection = DetectionJob{frame->id, frame->timestamp};
        }
    }
    if (!recognition_busy_) {
        if (auto frame = store_.checkout(Stage::recognition)) {
            recognition_busy_ = true;
            emit(now, TraceKind::checkout,
                 {{"stage", "recognition"}, {"frame_id", frame->id}});
            RecognitionJob job{frame->id, frame->timestamp, {}};
            auto it = assignments_.find(frame->id);
            if (it != assignments_.end()) {
                const auto truth = ground_truth_at(
                    scenario_, std::clamp<Timestamp>(frame->timestamp, 0, scenario_.duration));
                for (const MatchedPair& pair : it->second.faces) {
                    const FaceTrack* track = registry_.find(pair.track_id);
                    if (!track)
                        continue; // expired while the frame sat in the buffer
                    RecognitionFaceJob face;
                    face.track_id = pair.track_id;
                    face.det_index = pair.detection_index;
                    face.box = frame->meta.detections[pair.detection_index].box;
                    face.cycle_index = track->recognition_cycle;
                    const auto& src = it->second.source_actor;
                    if (pair.detection_index < src.size() && src[pair.detection_index]) {
                        const std::int64_t actor = *src[pair.detection_index];
                        for (const GroundTruthFace& g : truth)
                            if (g.actor_id == actor) {
                                face.truth = g;
                                break;
                            }
                    }
                    job.faces.push_back(std::move(face));
                }
            }
            d.recognition = std::move(job);
        }
    }
    return d;
}

Controller::Dispatch Controller::on_detect_done(Timestamp now, const DetectionJob& job,
                                                DetectionOutcome outcome) {
    detection_busy_ = false;
    const auto result = store_.complete(job.frame_id, Stage::detection, outcome.detections);
    if (result == FrameStore::CompleteResult::evicted_noop) {
        emit(now, TraceKind::drop_noop,
             {{"frame_id", job.frame_id}, {"stage", "detection"}, {"reason", "evicted"}});
        return try_dispatch(now);
    }

    ordered_json dets = ordered_json::array();
    for (const Detection& det : outcome.detections)
        dets.push_back({{"box", box_to_json(det.box)}, {"confidence", det.confidence}});
    ++frames_detected_;
    emit(now, TraceKind::detect_done,
         {{"frame_id", job.frame_id},
          {"frame_ts", job.frame_ts},
          {"latency_us", outcome.latency_us},
          {"detections", std::move(dets)}});

    const Assignment assign =
        registry_.match_detections(outcome.detections, job.frame_id, job.frame_ts);

    FrameAssignment fa;
    fa.source_actor = std::move(outcome.source_actor);
    ordered_json matched = ordered_json::array();
    for (const MatchedPair& m : assign.matched) {
        matched.push_back({{"track_id", m.track_id},
                           {"det", m.detection_index},
                           {"box", box_to_json(outcome.detections[m.detection_index].box)}});
        fa.faces.push_back(m);
    }
    ordered_json spawned = ordered_json::array();
    for (const MatchedPair& m : assign.spawned) {
        spawned.push_back({{"track_id", m.track_id},
                           {"det", m.detection_index},
                           {"box", box_to_json(outcome.detections[m.detection_index].box)}});
        fa.faces.push_back(m);
    }
    std::sort(fa.faces.begin(), fa.faces.end(),
              [](const MatchedPair& a, const MatchedPair& b) {
                  return a.detection_index < b.detection_index;
              });
    assignments_[job.frame_id] = std::move(fa);

    emit(now, TraceKind::track_update,
         {{"frame_id", job.frame_id},
          {"frame_ts", job.frame_ts},
          {"matched", std::move(matched)},
          {"new", std::move(spawned)},
          {"missed", assign.missed}});

    const auto removed = registry_.prune(now);
    if (!removed.empty())
        emit(now, TraceKind::prune, {{"removed", removed}});

    return try_dispatch(now);
}

Controller::Dispatch Controller::on_recognize_done(Timestamp now, const RecognitionJob& job,
                                                   RecognitionOutcome outcome) {
    recognition_busy_ = false;
    const auto result = store_.complete(job.frame_id, Stage::recognition);
    if (result == FrameStore::CompleteResult::evicted_noop) {
        emit(now, TraceKind::drop_noop,
             {{"frame_id", job.frame_id}, {"stage", "recognition"}, {"reason", "evicted"}});
        return try_dispatch(now);
    }
    assignments_.erase(job.frame_id);

    auto transform_json = [](const SimilarityTransform& t) {
        return ordered_json{{"scale", t.scale},
                            {"rotation", t.rotation},
                            {"tx", t.translation.x},
                            {"ty", t.translation.y}};
    };
    for (const FaceOutcome& face : outcome.faces)
        emit(now, TraceKind::landmarks,
             {{"frame_id", job.frame_id},
              {"track_id", face.track_id},
              {"residual", face.residual},
              {"gt", transform_json(face.generating)},
              {"est", transform_json(face.estimated)}});

    ordered_json faces = ordered_json::array();
    for (const FaceOutcome& face : outcome.faces) {
        ordered_json jf;
        jf["track_id"] = face.track_id;
        jf["det"] = face.det_index;
        jf["box"] = box_to_json(face.box);
        ordered_json tasks = ordered_json::array();
        if (face.tasks.age)
            tasks.push_back("age");
        if (face.tasks.gender)
            tasks.push_back("gender");
        if (face.tasks.expression)
            tasks.push_back("expression");
        jf["tasks"] = std::move(tasks);
        jf["latency_us"] = face.latency_us;
        if (face.measurement.age_years)
            jf["age"] = *face.measurement.age_years;
        if (face.measurement.gender_p_female)
            jf["gender_p"] = *face.measurement.gender_p_female;
        if (face.measurement.expression)
            jf["expression"] = to_string(face.measurement.expression->argmax());
        faces.push_back(std::move(jf));
    }
    ++recognition_passes_;
    faces_recognized_ += static_cast<std::int64_t>(outcome.faces.size());
    face_latency_total_us_ += outcome.total_latency_us;
    emit(now, TraceKind::recognize_done,
         {{"frame_id", job.frame_id},
          {"frame_ts", job.frame_ts},
          {"latency_us", outcome.total_latency_us},
          {"faces", std::move(faces)}});

    for (const FaceOutcome& face : outcome.faces) {
        FaceTrack* track = registry_.find(face.track_id);
        if (!track) {
            emit(now, TraceKind::drop_noop,
                 {{"frame_id", job.frame_id},
                  {"stage", "recognition"},
                  {"reason", "expired_track"},
                  {"track_id", face.track_id}});
            continue;
        }
        if (face.measurement.has_any()) {
            AttributeMeasurement m = face.measurement;
            m.measured_at = now;
            track->estimates.update(m);
        }
        ++track->recognition_cycle;
    }

    return try_dispatch(now);
}

void Controller::on_tick(Timestamp now, std::int64_t tick_index) {
    AnnotatedFrame af;
    af.ts = now;
    if (auto latest = store_.latest())
        af.frame_id = latest->id;

    ordered_json jtracks = ordered_json::array();
    for (const auto& [id, track] : registry_.tracks()) {
        AnnotatedTrack at;
        at.track_id = id;
        at.box = track.last_box;
        if (auto sm = track.estimates.smoothed()) {
            if (sm->age)
                at.age_years = static_cast<int>(std::llround(sm->age->years));
            if (sm->gender) {
                at.gender = sm->gender->label;
                at.gender_p = sm->gender->p_female;
            }
            if (sm->expression)
                at.expression = sm->expression->label;
        }
        if (auto newest = track.estimates.newest_measurement_at())
            at.staleness_us = now - *newest;
        ordered_json jt;
        jt["track_id"] = id;
        if (at.staleness_us)
            jt["staleness_us"] = *at.staleness_us;
        else
            jt["staleness_us"] = nullptr;
        jtracks.push_back(std::move(jt));
        af.tracks.push_back(std::move(at));
    }

    ++ticks_;
    emit(now, TraceKind::tick,
         {{"tick", tick_index},
          {"frame_id", af.frame_id ? ordered_json(*af.frame_id) : ordered_json(nullptr)},
          {"tracks", std::move(jtracks)}});
    annotated_.push_back(std::move(af));
}

RunSummary Controller::summarize() const {
    RunSummary s;
    s.ticks = ticks_;
    s.frames_grabbed = frames_grabbed_;
    s.frames_detected = frames_detected_;
    s.recognition_passes = recognition_passes_;
    s.faces_recognized = faces_recognized_;
    s.tracks_created = registry_.created_count();
    s.drop_count = static_cast<std::int64_t>(store_.drop_count());
    if (faces_recognized_ > 0)
        s.mean_face_recognition_ms =
            us_to_ms(face_latency_total_us_) / static_cast<double>(faces_recognized_);
    if (!trace_.empty()) {
        const TimingStats t = timing_stats(trace_);
        s.achieved_fps = t.achieved_fps;
        s.mean_staleness_ms = t.staleness_mean_ms;
        s.p95_staleness_ms = t.staleness_p95_ms;
    }
    return s;
}

} // namespace facepipe::detail
