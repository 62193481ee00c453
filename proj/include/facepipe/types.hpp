#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "facepipe/geometry.hpp"

namespace facepipe {

/// Microseconds since run start.
using Timestamp = std::int64_t;

constexpr Timestamp kMicrosPerMilli = 1'000;
constexpr Timestamp kMicrosPerSecond = 1'000'000;

inline constexpr Timestamp ms_to_us(double ms) {
    return static_cast<Timestamp>(ms * static_cast<double>(kMicrosPerMilli) + (ms >= 0 ? 0.5 : -0.5));
}
inline constexpr double us_to_ms(Timestamp us) {
    return static_cast<double>(us) / static_cast<double>(kMicrosPerMilli);
}

enum class Stage { detection, recognition };

const char* to_string(Stage s);

enum class Gender { female, male };

const char* to_string(Gender g);
std::optional<Gender> gender_from_string(std::string_view s);

/// p(female) >= 0.5 reads as female.
inline Gender gender_label(double p_female) {
    return p_female >= 0.5 ? Gender::female : Gender::male;
}

/// Fixed class order; index doubles as the class id everywhere.
enum class Expression : int {
    neutral = 0,
    happiness,
    sadness,
    surprise,
    fear,
    disgust,
    anger,
};

constexpr int kExpressionCount = 7;

const char* to_string(Expression e);
std::optional<Expression> expression_from_string(std::string_view s);

/// Probability distribution over the seven expression classes.
struct ExpressionDist {
    std::array<double, kExpressionCount> p{};

    /// Builds a distribution from raw weights, rescaling to sum 1.
    /// Throws InvalidInput on negative weights or all-zero input.
    static ExpressionDist normalized(const std::array<double, kExpressionCount>& weights);
    static ExpressionDist uniform();
    /// `mass` on `cls`, the rest spread evenly over the other classes.
    static ExpressionDist one_hot_smoothed(Expression cls, double mass = 0.9);

    double sum() const;
    bool is_normalized(double tol = 1e-9) const;
    /// Ties resolve to the lowest class index.
    Expression argmax() const;
};

/// Raw output of one recognition pass over one face crop. Only the tasks
/// that actually ran are populated.
struct AttributeMeasurement {
    std::optional<double> age_years;
    std::optional<double> gender_p_female; // in [0,1]
    std::optional<ExpressionDist> expression;
    Timestamp measured_at = 0; // when the measurement was produced

    bool has_any() const {
        return age_years.has_value() || gender_p_female.has_value() || expression.has_value();
    }
};

struct FrameMeta {
    bool detection_done = false;
    bool recognition_done = false;
    std::vector<Detection> detections;
    std::optional<Stage> in_flight;
};

struct Frame {
    std::int64_t id = 0;
    Timestamp timestamp = 0;
    int width = 240;
    int height = 180;
    std::vector<std::uint8_t> pixels; // empty in simulation
    FrameMeta meta;
};

} // namespace facepipe
