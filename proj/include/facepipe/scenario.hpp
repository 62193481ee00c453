#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "facepipe/cadence.hpp"
#include "facepipe/rng.hpp"
#include "facepipe/types.hpp"

namespace facepipe {

/// Stage latency distribution; samples are clamped at zero.
struct LatencyModel {
    enum class Kind { constant, uniform, normal };
    Kind kind = Kind::constant;
    double a_ms = 0.0; // constant value / uniform lo / normal mean
    double b_ms = 0.0; // uniform hi / normal sigma

    static LatencyModel constant(double ms) { return {Kind::constant, ms, 0.0}; }
    double sample_ms(Rng& rng) const;
    void validate(const std::string& where) const;
};

/// Parametric box trajectory; `start` is the box top-left at t = 0,
/// with t in scenario time. The sinusoidal kind adds a vertical
/// oscillation on top of the linear motion.
struct PathSpec {
    enum class Kind { linear, sinusoidal };
    Kind kind = Kind::linear;
    Vec2 start{};
    Vec2 velocity_px_s{};
    double amplitude_px = 0.0;
    Timestamp period = 1'000'000; // sinusoidal period

    Vec2 topleft_at(Timestamp ts) const;
};

struct ActorSpec {
    std::int64_t actor_id = 0;
    PathSpec path;
    double box_w = 60.0;
    double box_h = 80.0;
    Timestamp enter_ts = 0;
    Timestamp exit_ts = 0;
    double true_age = 30.0;
    Gender true_gender = Gender::female;
    /// (ts, class) change points, ascending; class before the first entry
    /// is the first entry's class.
    std::vector<std::pair<Timestamp, Expression>> expression_timeline;

    bool active_at(Timestamp ts) const { return ts >= enter_ts && ts < exit_ts; }
    Expression expression_at(Timestamp ts) const;
};

struct ConfidenceModel {
    double mean = 0.9;
    double sigma = 0.0;
};

/// Synthetic stand-in for the face detector stage.
struct DetectorModel {
    LatencyModel latency = LatencyModel::constant(10.0);
    double center_jitter_sigma_px = 0.0;
    double size_jitter_sigma_px = 0.0;
    double miss_prob = 0.0;
    double false_positive_rate = 0.0; // expected FPs per frame (Poisson)
    ConfidenceModel confidence_true{0.9, 0.0};
    ConfidenceModel confidence_false{0.3, 0.0};
};

/// Synthetic stand-in for the age/gender/expression recognizers.
struct RecognizerModel {
    LatencyModel age_latency = LatencyModel::constant(200.0);
    LatencyModel gender_latency = LatencyModel::constant(200.0);
    LatencyModel expression_latency = LatencyModel::constant(200.0);
    double age_noise_sigma = 0.0;
    double gender_flip_prob = 0.0;
    /// Row-stochastic 7x7; nullopt means identity (always correct class).
    std::optional<std::array<std::array<double, kExpressionCount>, kExpressionCount>>
        expression_confusion;

    double latency_ms_of(Task t, Rng& rng) const;
};

/// Synthetic stand-in for the 68-landmark detector.
struct LandmarkModel {
    double noise_sigma_px = 0.0;
    double max_rotation_rad = 0.0; // generating rotation ~ U(-max, max)
};

/// Scripted ground truth plus stage models; together with the seed this
/// fully determines a run in virtual-clock mode.
struct Scenario {
    Timestamp duration = 0;
    double frame_rate = 25.0;
    int frame_width = 240;
    int frame_height = 180;
    std::uint64_t seed = 0;
    std::optional<CadencePolicy> cadence;
    std::vector<ActorSpec> actors;
    DetectorModel detector;
    RecognizerModel recognizer;
    LandmarkModel landmarks;

    /// Strict parse: unknown keys are rejected. Throws ParseError.
    static Scenario from_json(const nlohmann::json& j);
    static Scenario parse(const std::string& text);
    static Scenario load(const std::string& path);
    nlohmann::ordered_json to_json() const;

    void validate() const; // throws ParseError
};

} // namespace facepipe
