#pragma once

#include <optional>
#include <vector>

#include "facepipe/alignment.hpp"
#include "facepipe/cadence.hpp"
#include "facepipe/scenario.hpp"
#include "facepipe/trace.hpp"
#include "facepipe/tracker.hpp"

namespace facepipe {

enum class ClockMode { virtual_clock, realtime };

/// Engine configuration. Optional fields fall back to the scenario's
/// values (frame rate, cadence, seed) or to the documented defaults.
struct PipelineConfig {
    ClockMode clock_mode = ClockMode::virtual_clock;
    std::optional<double> frame_rate;    // default: scenario frame_rate
    double visualization_rate = 25.0;
    std::size_t buffer_capacity = 32;
    TrackerConfig tracker{};
    std::optional<CadencePolicy> cadence; // default: scenario cadence or {1,4,4}
    std::size_t aggregation_window = 8;
    std::optional<std::uint64_t> seed_override;
    std::optional<FaceTemplate> face_template; // default: built-in 68 points

    void validate() const; // throws ConfigError
};

struct RunSummary {
    double achieved_fps = 0.0;
    std::int64_t ticks = 0;
    std::int64_t frames_grabbed = 0;
    std::int64_t frames_detected = 0;
    std::int64_t recognition_passes = 0;
    std::int64_t faces_recognized = 0;
    std::int64_t tracks_created = 0;
    std::int64_t drop_count = 0;
    double mean_face_recognition_ms = 0.0;
    double mean_staleness_ms = 0.0;
    double p95_staleness_ms = 0.0;

    nlohmann::ordered_json to_json() const;
};

struct RunResult {
    std::vector<TraceEvent> trace;
    std::vector<AnnotatedFrame> annotated;
    RunSummary summary;
};

/// Executes the scenario until its duration elapses.
///
/// Four roles, one contract: the grabber emits frames at the frame rate;
/// the detection worker checks out the newest un-detected frame, works
/// for its synthetic latency and completes; the controller then matches
/// detections to tracks and prunes; the recognition worker checks out the
/// newest detected-but-unrecognized frame with faces and runs landmarks,
/// alignment, cadence-selected recognizers per face; the visualization
/// tick renders the latest frame plus smoothed track attributes at its
/// own rate, never waiting on workers.
///
/// Virtual mode replays that contract on a discrete-event queue ordered
/// by (timestamp, sequence number) and is fully deterministic for a given
/// scenario + seed. Realtime mode runs the same contract on actual
/// threads exchanging messages, with the controller as sole owner of
/// buffer, tracks and windows.
RunResult run(const Scenario& scenario, const PipelineConfig& config);

} // namespace facepipe
