#pragma once

#include <optional>
#include <vector>

#include "facepipe/alignment.hpp"
#include "facepipe/cadence.hpp"
#include "facepipe/rng.hpp"
#include "facepipe/scenario.hpp"
#include "facepipe/types.hpp"

namespace facepipe {

struct GroundTruthFace {
    std::int64_t actor_id = 0;
    BBox box;
    double true_age = 0.0;
    Gender true_gender = Gender::female;
    Expression true_expression = Expression::neutral;
};

/// Faces present at `ts`, ascending by actor id, boxes clamped to the
/// frame. Throws InvalidInput when ts is outside [0, duration].
std::vector<GroundTruthFace> ground_truth_at(const Scenario& s, Timestamp ts);

struct SynthDetections {
    std::vector<Detection> detections;
    /// Parallel to `detections`; nullopt marks a false positive. Hidden
    /// provenance for the synthetic recognizer and the evaluator, never
    /// consulted by the pipeline itself.
    std::vector<std::optional<std::int64_t>> source_actor;
    Timestamp latency_us = 0;
};

/// Noisy detections for one frame: true faces survive with probability
/// 1 - miss_prob and get jittered; Poisson-many uniform false positives
/// are appended.
SynthDetections synth_detect(const std::vector<GroundTruthFace>& truth,
                             const DetectorModel& model, double frame_w, double frame_h,
                             Rng& rng);

struct SynthRecognition {
    AttributeMeasurement measurement; // measured_at left to the caller
    Timestamp latency_us = 0;
};

/// One recognition pass over one crop, restricted to `tasks`. A crop with
/// no underlying actor (false positive) yields a fixed background reading:
/// age 35, gender 0.5, uniform expression.
SynthRecognition synth_recognize(const std::optional<GroundTruthFace>& truth,
                                 const TaskSet& tasks, const RecognizerModel& model, Rng& rng);

struct SynthLandmarks {
    std::vector<Vec2> points;
    /// The transform that generated the points from the template;
    /// recorded as alignment ground truth.
    SimilarityTransform generating;
};

/// Template points placed into the face box by a similarity transform
/// (scale from box width, small random rotation, template centroid to box
/// center) plus isotropic Gaussian noise.
SynthLandmarks synth_landmarks(const BBox& face_box, const FaceTemplate& tmpl,
                               const LandmarkModel& model, Rng& rng);

} // namespace facepipe
