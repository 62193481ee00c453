#include "facepipe/types.hpp"

#include <cmath>

#include "facepipe/error.hpp"

namespace facepipe {

const char* to_string(Stage s) {
    return s == Stage::detection ? "detection" : "recognition";
}

const char* to_string(Gender g) {
    return g == Gender::female ? "female" : "male";
}

std::optional<Gender> gender_from_string(std::string_view s) {
    if (s == "female")
        return Gender::female;
    if (s == "male")
        return Gender::male;
    return std::nullopt;
}

namespace {
constexpr const char* kExpressionNames[kExpressionCount] = {
    "neutral", "happiness", "sadness", "surprise", "fear", "disgust", "anger",
};
}

const char* to_string(Expression e) {
    return kExpressionNames[static_cast<int>(e)];
}

std::optional<Expression> expression_from_string(std::string_view s) {
    for (int i = 0; i < kExpressionCount; ++i)
        if (s == kExpressionNames[i])
            return static_cast<Expression>(i);
    return std::nullopt;
}

ExpressionDist ExpressionDist::normalized(const std::array<double, kExpressionCount>& weights) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw InvalidInput("expression weights must be finite and non-negative");
        total += w;
    }
    if (total <= 0.0)
        throw InvalidInput("expression weights must not all be zero");
    ExpressionDist d;
    for (int i = 0; i < kExpressionCount; ++i)
        d.p[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(i)] / total;
    return d;
}

ExpressionDist ExpressionDist::uniform() {
    ExpressionDist d;
    d.p.fill(1.0 / kExpressionCount);
    return d;
}

ExpressionDist ExpressionDist::one_hot_smoothed(Expression cls, double mass) {
    if (mass < 0.0 || mass > 1.0)
        throw InvalidInput("one-hot mass must be in [0,1]");
    ExpressionDist d;
    d.p.fill((1.0 - mass) / (kExpressionCount - 1));
    d.p[static_cast<std::size_t>(cls)] = mass;
    return d;
}

double ExpressionDist::sum() const {
    double s = 0.0;
    for (double v : p)
        s += v;
    return s;
}

bool ExpressionDist::is_normalized(double tol) const {
    for (double v : p)
        if (v < 0.0 || v > 1.0)
            return false;
    return std::abs(sum() - 1.0) <= tol;
}

Expression ExpressionDist::argmax() const {
    int best = 0;
    for (int i = 1; i < kExpressionCount; ++i)
        if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(best)])
            best = i;
    return static_cast<Expression>(best);
}

} // namespace facepipe
