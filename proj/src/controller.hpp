#pragma once

// Internal: pipeline state machine shared by the virtual-clock and
// realtime drivers. Not installed.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "facepipe/frame_store.hpp"
#include "facepipe/runtime.hpp"
#include "facepipe/synthetic.hpp"

namespace facepipe::detail {

/// Config with every optional resolved, as the engine consumes it.
struct ResolvedConfig {
    double frame_rate;
    double visualization_rate;
    std::size_t buffer_capacity;
    TrackerConfig tracker;
    CadencePolicy cadence;
    std::size_t aggregation_window;
    std::uint64_t seed;
    FaceTemplate face_template;
};

ResolvedConfig resolve(const Scenario& scenario, const PipelineConfig& config);

struct DetectionJob {
    std::int64_t frame_id = 0;
    Timestamp frame_ts = 0;
};

struct RecognitionFaceJob {
    std::int64_t track_id = 0;
    std::size_t det_index = 0;
    BBox box;
    int cycle_index = 0;
    std::optional<GroundTruthFace> truth; // nullopt for background crops
};

struct RecognitionJob {
    std::int64_t frame_id = 0;
    Timestamp frame_ts = 0;
    std::vector<RecognitionFaceJob> faces;
};

struct DetectionOutcome {
    std::vector<Detection> detections;
    std::vector<std::optional<std::int64_t>> source_actor;
    Timestamp latency_us = 0;
};

struct FaceOutcome {
    std::int64_t track_id = 0;
    std::size_t det_index = 0;
    BBox box;
    SimilarityTransform generating;
    SimilarityTransform estimated;
    double residual = 0.0;
    TaskSet tasks;
    AttributeMeasurement measurement; // measured_at filled on application
    Timestamp latency_us = 0;
};

struct RecognitionOutcome {
    std::vector<FaceOutcome> faces;
    Timestamp total_latency_us = 0;
};

/// The worker bodies. Pure functions of (scenario, config, job): results
/// do not depend on when or on which thread they run.
DetectionOutcome perform_detection(const Scenario& s, const ResolvedConfig& rc,
                                   const DetectionJob& job);
RecognitionOutcome perform_recognition(const Scenario& s, const ResolvedConfig& rc,
                                       const RecognitionJob& job);

/// Owns buffer, tracks and windows; workers talk to it in messages.
/// Handlers mutate state, append trace events, and hand back at most one
/// new job per worker for the driver to deliver.
class Controller {
public:
    struct Dispatch {
        std::optional<DetectionJob> detection;
        std::optional<RecognitionJob> recognition;
    };

    Controller(const Scenario& scenario, const ResolvedConfig& rc);

    Dispatch on_grab(Timestamp now, Frame frame);
    Dispatch on_detect_done(Timestamp now, const DetectionJob& job, DetectionOutcome outcome);
    Dispatch on_recognize_done(Timestamp now, const RecognitionJob& job,
                               RecognitionOutcome outcome);
    void on_tick(Timestamp now, std::int64_t tick_index);

    std::vector<TraceEvent>& trace() { return trace_; }
    std::vector<AnnotatedFrame>& annotated() { return annotated_; }

    RunSummary summarize() const;

private:
    void emit(Timestamp ts, TraceKind kind, nlohmann::ordered_json payload);
    Dispatch try_dispatch(Timestamp now);

    const Scenario& scenario_;
    const ResolvedConfig& rc_;
    FrameStore store_;
    TrackRegistry registry_;
    bool detection_busy_ = false;
    bool recognition_busy_ = false;

    struct FrameAssignment {
        std::vector<MatchedPair> faces; // matched + spawned, by det index
        std::vector<std::optional<std::int64_t>> source_actor;
    };
    std::map<std::int64_t, FrameAssignment> assignments_;

    std::vector<TraceEvent> trace_;
    std::vector<AnnotatedFrame> annotated_;

    std::int64_t frames_grabbed_ = 0;
    std::int64_t frames_detected_ = 0;
    std::int64_t recognition_passes_ = 0;
    std::int64_t faces_recognized_ = 0;
    std::int64_t ticks_ = 0;
    Timestamp face_latency_total_us_ = 0;
};

/// Grab/tick schedule: event i fires at round(i * 1e6 / rate), which is
/// drift-free and lands exactly on 40 ms multiples at 25 fps.
Timestamp schedule_at(std::int64_t index, double rate_hz);

} // namespace facepipe::detail
