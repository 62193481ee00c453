#include "facepipe/aggregation.hpp"

#include <algorithm>

#include "facepipe/error.hpp"

namespace facepipe {

AttributeWindows::AttributeWindows(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0)
        throw InvalidInput("window capacity must be >= 1");
}

void AttributeWindows::update(const AttributeMeasurement& m) {
    if (!m.has_any())
        throw InvalidInput("measurement carries no attribute");
    if (m.age_years) {
        age_.push_back({*m.age_years, m.measured_at});
        if (age_.size() > capacity_)
            age_.pop_front();
    }
    if (m.gender_p_female) {
        if (*m.gender_p_female < 0.0 || *m.gender_p_female > 1.0)
            throw InvalidInput("gender probability out of [0,1]");
        gender_.push_back({*m.gender_p_female, m.measured_at});
        if (gender_.size() > capacity_)
            gender_.pop_front();
    }
    if (m.expression) {
        if (!m.expression->is_normalized())
            throw InvalidInput("expression distribution not normalized");
        expression_.push_back({*m.expression, m.measured_at});
        if (expression_.size() > capacity_)
            expression_.pop_front();
    }
}

std::optional<SmoothedAttributes> AttributeWindows::smoothed() const {
    if (age_.empty() && gender_.empty() && expression_.empty())
        return std::nullopt;

    SmoothedAttributes out;
    if (!age_.empty()) {
        double sum = 0.0;
        for (const auto& e : age_)
            sum += e.value;
        out.age = SmoothedAge{sum / static_cast<double>(age_.size()), age_.size()};
    }
    if (!gender_.empty()) {
        double sum = 0.0;
        for (const auto& e : gender_)
            sum += e.value;
        const double p = sum / static_cast<double>(gender_.size());
        out.gender = SmoothedGender{gender_label(p), p, gender_.size()};
    }
    if (!expression_.empty()) {
        std::array<double, kExpressionCount> acc{};
        for (const auto& e : expression_)
            for (int i = 0; i < kExpressionCount; ++i)
                acc[static_cast<std::size_t>(i)] += e.dist.p[static_cast<std::size_t>(i)];
        const ExpressionDist mean = ExpressionDist::normalized(acc);
        out.expression = SmoothedExpression{mean.argmax(), mean, expression_.size()};
    }
    return out;
}

std::optional<Timestamp> AttributeWindows::newest_measurement_at() const {
    std::optional<Timestamp> newest;
    auto consider = [&](Timestamp t) {
        if (!newest || t > *newest)
            newest = t;
    };
    if (!age_.empty())
        consider(age_.back().at);
    if (!gender_.empty())
        consider(gender_.back().at);
    if (!expression_.empty())
        consider(expression_.back().at);
    return newest;
}

} // namespace facepipe
