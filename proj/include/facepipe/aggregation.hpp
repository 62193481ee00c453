#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "facepipe/types.hpp"

namespace facepipe {

struct SmoothedAge {
    double years = 0.0;
    std::size_t samples = 0;
};

struct SmoothedGender {
    Gender label = Gender::female;
    double p_female = 0.0;
    std::size_t samples = 0;
};

struct SmoothedExpression {
    Expression label = Expression::neutral;
    ExpressionDist probabilities;
    std::size_t samples = 0;
};

/// Window-averaged attribute values ready for display. Attributes whose
/// windows are still empty are absent.
struct SmoothedAttributes {
    std::optional<SmoothedAge> age;
    std::optional<SmoothedGender> gender;
    std::optional<SmoothedExpression> expression;
};

/// Rolling per-track windows of raw measurements, one bounded FIFO per
/// attribute. Averaging over the window is what the display shows; it
/// trades a little staleness for much steadier labels.
class AttributeWindows {
public:
    explicit AttributeWindows(std::size_t capacity = 8);

    /// Appends every attribute present in `m`; oldest entries fall off
    /// beyond capacity. Throws InvalidInput on an empty measurement.
    void update(const AttributeMeasurement& m);

    /// Unweighted means; nullopt when every window is empty.
    std::optional<SmoothedAttributes> smoothed() const;

    /// Production time of the newest entry across all windows.
    std::optional<Timestamp> newest_measurement_at() const;

    std::size_t capacity() const { return capacity_; }
    std::size_t age_samples() const { return age_.size(); }
    std::size_t gender_samples() const { return gender_.size(); }
    std::size_t expression_samples() const { return expression_.size(); }

private:
    struct TimedValue {
        double value;
        Timestamp at;
    };
    struct TimedDist {
        ExpressionDist dist;
        Timestamp at;
    };

    std::size_t capacity_;
    std::deque<TimedValue> age_;
    std::deque<TimedValue> gender_;
    std::deque<TimedDist> expression_;
};

} // namespace facepipe
