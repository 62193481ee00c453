#include <doctest.h>

#include <string>

#include "facepipe/error.hpp"
#include "facepipe/scenario.hpp"

using namespace facepipe;

namespace {
const std::string kScenarioDir = FACEPIPE_SCENARIO_DIR;
}

TEST_CASE("minimal scenario parses with defaults") {
    const auto s = Scenario::parse(R"({"duration_ms": 1000})");
    CHECK(s.duration == 1'000'000);
    CHECK(s.frame_rate == 25.0);
    CHECK(s.frame_width == 240);
    CHECK(s.frame_height == 180);
    CHECK(s.seed == 0);
    CHECK(s.actors.empty());
    CHECK(!s.cadence.has_value());
    CHECK(s.detector.latency.kind == LatencyModel::Kind::constant);
    CHECK(s.detector.latency.a_ms == 10.0);
    CHECK(s.recognizer.age_latency.a_ms == 200.0);
    CHECK(!s.recognizer.expression_confusion.has_value());
}

TEST_CASE("bundled scenarios load and round-trip through to_json") {
    for (const char* name : {"demo.json", "noiseless.json", "overload.json", "empty.json"}) {
        const auto s = Scenario::load(kScenarioDir + "/" + name);
        const auto again = Scenario::from_json(s.to_json());
        CHECK(again.duration == s.duration);
        CHECK(again.seed == s.seed);
        CHECK(again.actors.size() == s.actors.size());
        CHECK(again.detector.miss_prob == s.detector.miss_prob);
    }
}

TEST_CASE("unknown keys are rejected at every level") {
    CHECK_THROWS_WITH_AS(Scenario::parse(R"({"duration_ms": 1000, "durationms": 5})"),
                         doctest::Contains("unknown key 'durationms'"), ParseError);
    CHECK_THROWS_WITH_AS(
        Scenario::parse(R"({"duration_ms": 1000, "detector": {"latencyy": {}}})"),
        doctest::Contains("unknown key 'latencyy'"), ParseError);
    CHECK_THROWS_WITH_AS(
        Scenario::parse(R"({"duration_ms": 1000,
            "actors": [{"actor_id": 1,
                        "path": {"kind": "linear", "start": [0,0], "speed": 3}}]})"),
        doctest::Contains("unknown key 'speed'"), ParseError);
}

TEST_CASE("missing required keys are reported") {
    CHECK_THROWS_WITH_AS(Scenario::parse(R"({})"), doctest::Contains("duration_ms"),
                         ParseError);
    CHECK_THROWS_WITH_AS(
        Scenario::parse(R"({"duration_ms": 1000, "actors": [{"path": {"kind": "linear",
                         "start": [0,0]}}]})"),
        doctest::Contains("actor_id"), ParseError);
}

TEST_CASE("invalid JSON text is a parse error") {
    CHECK_THROWS_AS(Scenario::parse("{nope"), ParseError);
}

TEST_CASE("range violations are rejected") {
    CHECK_THROWS_AS(Scenario::parse(R"({"duration_ms": 0})"), ParseError);
    CHECK_THROWS_AS(Scenario::parse(R"({"duration_ms": 1000, "frame_rate": -1})"), ParseError);
    CHECK_THROWS_AS(
        Scenario::parse(R"({"duration_ms": 1000, "detector": {"miss_prob": 1.5}})"),
        ParseError);
    CHECK_THROWS_AS(
        Scenario::parse(
            R"({"duration_ms": 1000, "recognizer": {"gender_flip_prob": -0.1}})"),
        ParseError);
    CHECK_THROWS_AS(
        Scenario::parse(R"({"duration_ms": 1000, "cadence": {"age_every": 0}})"),
        ParseError);
}

TEST_CASE("actor windows must fit the duration") {
    CHECK_THROWS_AS(Scenario::parse(R"({"duration_ms": 1000, "actors": [
        {"actor_id": 1, "path": {"kind": "linear", "start": [0,0]},
         "enter_ms": 500, "exit_ms": 400}]})"),
                    ParseError);
    CHECK_THROWS_AS(Scenario::parse(R"({"duration_ms": 1000, "actors": [
        {"actor_id": 1, "path": {"kind": "linear", "start": [0,0]},
         "exit_ms": 2000}]})"),
                    ParseError);
}

TEST_CASE("same actor id may re-enter but not overlap") {
    const char* ok = R"({"duration_ms": 2000, "actors": [
        {"actor_id": 1, "path": {"kind": "linear", "start": [0,0]},
         "enter_ms": 0, "exit_ms": 800},
        {"actor_id": 1, "path": {"kind": "linear", "start": [0,0]},
         "enter_ms": 1200, "exit_ms": 2000}]})";
    CHECK_NOTHROW(Scenario::parse(ok));

    const char* overlapping = R"({"duration_ms": 2000, "actors": [
        {"actor_id": 1, "path": {"kind": "linear", "start": [0,0]},
         "enter_ms": 0, "exit_ms": 1300},
        {"actor_id": 1, "path": {"kind": "linear", "start": [0,0]},
         "enter_ms": 1200, "exit_ms": 2000}]})";
    CHECK_THROWS_WITH_AS(Scenario::parse(overlapping), doctest::Contains("overlapping"),
                         ParseError);
}

TEST_CASE("confusion matrix rows must be stochastic") {
    std::string good = R"({"duration_ms": 1000, "recognizer": {"expression_confusion": [)";
    std::string bad = good;
    for (int r = 0; r < 7; ++r) {
        good += "[1,0,0,0,0,0,0]";
        bad += r == 3 ? "[0.5,0,0,0,0,0,0]" : "[1,0,0,0,0,0,0]";
        if (r < 6) {
            good += ",";
            bad += ",";
        }
    }
    good += "]}}";
    bad += "]}}";
    CHECK_NOTHROW(Scenario::parse(good));
    CHECK_THROWS_WITH_AS(Scenario::parse(bad), doctest::Contains("sum to 1"), ParseError);

    CHECK_NOTHROW(Scenario::parse(
        R"({"duration_ms": 1000, "recognizer": {"expression_confusion": "identity"}})"));
    CHECK_THROWS_AS(Scenario::parse(
        R"({"duration_ms": 1000, "recognizer": {"expression_confusion": "nonsense"}})"),
                    ParseError);
}

TEST_CASE("expression timeline must be sorted and known") {
    CHECK_THROWS_AS(Scenario::parse(R"({"duration_ms": 1000, "actors": [
        {"actor_id": 1, "path": {"kind": "linear", "start": [0,0]},
         "expression_timeline": [[500, "neutral"], [100, "anger"]]}]})"),
                    ParseError);
    CHECK_THROWS_AS(Scenario::parse(R"({"duration_ms": 1000, "actors": [
        {"actor_id": 1, "path": {"kind": "linear", "start": [0,0]},
         "expression_timeline": [[0, "smug"]]}]})"),
                    ParseError);
}

TEST_CASE("expression_at follows the timeline") {
    const auto s = Scenario::parse(R"({"duration_ms": 3000, "actors": [
        {"actor_id": 1, "path": {"kind": "linear", "start": [0,0]},
         "expression_timeline": [[500, "happiness"], [2000, "anger"]]}]})");
    const ActorSpec& a = s.actors[0];
    CHECK(a.expression_at(0) == Expression::happiness); // before first entry
    CHECK(a.expression_at(500'000) == Expression::happiness);
    CHECK(a.expression_at(1'999'999) == Expression::happiness);
    CHECK(a.expression_at(2'000'000) == Expression::anger);
}

TEST_CASE("path evaluation") {
    PathSpec linear;
    linear.start = {0, 0};
    linear.velocity_px_s = {10, 0};
    const Vec2 p = linear.topleft_at(1'000'000);
    CHECK(p.x == doctest::Approx(10.0));
    CHECK(p.y == doctest::Approx(0.0));

    PathSpec sine;
    sine.kind = PathSpec::Kind::sinusoidal;
    sine.start = {50, 50};
    sine.amplitude_px = 20;
    sine.period = 2'000'000;
    CHECK(sine.topleft_at(0).y == doctest::Approx(50.0));
    CHECK(sine.topleft_at(500'000).y == doctest::Approx(70.0));  // quarter period
    CHECK(sine.topleft_at(1'000'000).y == doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("latency model sampling respects bounds and clamping") {
    Rng rng(9);
    LatencyModel uniform{LatencyModel::Kind::uniform, 5.0, 9.0};
    for (int i = 0; i < 200; ++i) {
        const double v = uniform.sample_ms(rng);
        CHECK(v >= 5.0);
        CHECK(v < 9.0);
    }
    LatencyModel heavy_noise{LatencyModel::Kind::normal, 1.0, 50.0};
    for (int i = 0; i < 200; ++i)
        CHECK(heavy_noise.sample_ms(rng) >= 0.0);
    LatencyModel constant = LatencyModel::constant(200.0);
    CHECK(constant.sample_ms(rng) == 200.0);
}

TEST_CASE("loading a missing scenario file is an IO error") {
    CHECK_THROWS_AS(Scenario::load("/nonexistent/scenario.json"), IoError);
}
