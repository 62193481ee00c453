#pragma once

#include <span>
#include <string>
#include <vector>

#include "facepipe/scenario.hpp"
#include "facepipe/trace.hpp"

namespace facepipe {

struct ScoredBox {
    BBox box;
    double confidence = 0.0;
};

/// Detection AP at one IoU threshold. Detections are pooled across
/// frames, sorted by confidence descending (ties by frame, then index),
/// greedily matched to the highest-IoU free ground truth of their frame,
/// and scored by the area under the all-point precision-recall curve
/// (precision envelope). Conventions for empty inputs: 1 when neither
/// detections nor ground truth exist, 0 when only one side is empty.
/// Throws InvalidInput unless 0 < iou_threshold <= 1.
double average_precision(const std::vector<std::vector<ScoredBox>>& detections_per_frame,
                         const std::vector<std::vector<BBox>>& ground_truth_per_frame,
                         double iou_threshold);

/// Mean absolute error. Throws InvalidInput on empty or mismatched input.
double age_mae(std::span<const double> predicted, std::span<const double> truth);

/// Fraction of exactly equal labels. Throws InvalidInput on empty or
/// mismatched input.
double classification_accuracy(std::span<const int> predicted, std::span<const int> truth);

/// Number of times the track id covering a ground-truth actor changes.
/// Actors are associated to tracks per detection frame by max IoU of the
/// assigned track boxes (ties to the lowest track id); frames where an
/// actor has no overlapping track leave its assignment unchanged.
std::int64_t identity_switches(const std::vector<TraceEvent>& trace, const Scenario& scenario);

struct TimingStats {
    double achieved_fps = 0.0;
    double staleness_mean_ms = 0.0;
    double staleness_p95_ms = 0.0;
    std::int64_t drop_count = 0;
    std::int64_t ticks = 0;
};

/// Tick spacing, per-track display staleness and drops, replayed from the
/// trace alone. Throws InvalidInput on an empty trace.
TimingStats timing_stats(const std::vector<TraceEvent>& trace);

struct EvalReport {
    double detection_ap = 0.0;
    double age_mae_years = 0.0;
    double gender_accuracy = 0.0;
    double expression_accuracy = 0.0;
    std::int64_t identity_switches = 0;
    double achieved_fps = 0.0;
    double staleness_mean_ms = 0.0;
    double staleness_p95_ms = 0.0;
    std::int64_t drop_count = 0;
    std::int64_t detection_frames = 0;
    std::int64_t age_samples = 0;
    std::int64_t gender_samples = 0;
    std::int64_t expression_samples = 0;

    nlohmann::ordered_json to_json() const;
    /// Two-column table, one row per stage.
    std::string to_csv() const;
};

/// Replays a trace against its scenario's ground truth. Attribute metrics
/// compare raw per-cycle measurements with the truth of the measured
/// frame; a measurement is attributed to the actor whose ground-truth box
/// overlaps its crop most. Throws InvalidInput when the trace is
/// inconsistent with the scenario.
EvalReport evaluate(const std::vector<TraceEvent>& trace, const Scenario& scenario);

} // namespace facepipe
