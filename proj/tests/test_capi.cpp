#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "facepipe.h"

namespace fs = std::filesystem;

namespace {

const std::string kScenarioDir = FACEPIPE_SCENARIO_DIR;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fp_capi_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const char* name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::strlen(fp_version()) > 0);
    CHECK(std::string(fp_status_name(FP_OK)) == "ok");
    CHECK(std::string(fp_status_name(FP_ERROR_PARSE)) == "parse_error");
    CHECK(std::string(fp_status_name(FP_ERROR_MISMATCH)) == "mismatch");
}

TEST_CASE("null arguments are rejected with a message") {
    CHECK(fp_scenario_load(nullptr, nullptr) == FP_ERROR_INVALID_ARGUMENT);
    CHECK(std::strlen(fp_last_error()) > 0);
    CHECK(fp_run(nullptr, nullptr, nullptr) == FP_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("missing scenario file maps to IO error") {
    fp_scenario* s = nullptr;
    CHECK(fp_scenario_load("/nonexistent/whatever.json", &s) == FP_ERROR_IO);
    CHECK(s == nullptr);
}

TEST_CASE("malformed scenario text maps to parse error") {
    fp_scenario* s = nullptr;
    CHECK(fp_scenario_parse("{oops", &s) == FP_ERROR_PARSE);
    CHECK(fp_scenario_parse(R"({"duration_ms": 100, "bogus_key": 1})", &s) == FP_ERROR_PARSE);
    CHECK(std::string(fp_last_error()).find("bogus_key") != std::string::npos);
}

TEST_CASE("free functions tolerate null") {
    fp_scenario_free(nullptr);
    fp_result_free(nullptr);
    fp_report_free(nullptr);
    fp_string_free(nullptr);
}

TEST_CASE("run, write outputs, evaluate, summaries") {
    TempDir tmp;
    fp_scenario* scenario = nullptr;
    REQUIRE(fp_scenario_load((kScenarioDir + "/noiseless.json").c_str(), &scenario) == FP_OK);

    fp_run_options options;
    fp_run_options_init(&options);
    fp_result* result = nullptr;
    REQUIRE(fp_run(scenario, &options, &result) == FP_OK);

    REQUIRE(fp_result_write_trace(result, tmp.file("trace.jsonl").c_str()) == FP_OK);
    REQUIRE(fp_result_write_annotated(result, tmp.file("annotated.jsonl").c_str()) == FP_OK);
    REQUIRE(fp_result_write_metrics(result, tmp.file("metrics.json").c_str()) == FP_OK);
    CHECK(fs::file_size(tmp.path / "trace.jsonl") > 1000);
    CHECK(fs::file_size(tmp.path / "annotated.jsonl") > 100);
    CHECK(slurp(tmp.path / "metrics.json").find("achieved_fps") != std::string::npos);

    char* summary = nullptr;
    REQUIRE(fp_result_summary(result, &summary) == FP_OK);
    CHECK(std::string(summary).find("fps=") != std::string::npos);
    fp_string_free(summary);

    fp_report* report = nullptr;
    REQUIRE(fp_evaluate(tmp.file("trace.jsonl").c_str(),
                        (kScenarioDir + "/noiseless.json").c_str(), &report) == FP_OK);
    REQUIRE(fp_report_write_json(report, tmp.file("eval.json").c_str()) == FP_OK);
    REQUIRE(fp_report_write_csv(report, tmp.file("table.csv").c_str()) == FP_OK);

    const std::string eval_json = slurp(tmp.path / "eval.json");
    CHECK(eval_json.find("\"detection_ap\": 1.0") != std::string::npos);
    const std::string csv = slurp(tmp.path / "table.csv");
    CHECK(csv.find("stage,metric") == 0);
    CHECK(csv.find("Detection") != std::string::npos);
    CHECK(csv.find("Expression") != std::string::npos);

    char* eval_summary = nullptr;
    REQUIRE(fp_report_summary(report, &eval_summary) == FP_OK);
    CHECK(std::string(eval_summary).find("AP@0.5IoU=1.000") != std::string::npos);
    fp_string_free(eval_summary);

    fp_report_free(report);
    fp_result_free(result);
    fp_scenario_free(scenario);
}

TEST_CASE("same seed twice gives byte-identical traces through the C API") {
    TempDir tmp;
    fp_scenario* scenario = nullptr;
    REQUIRE(fp_scenario_load((kScenarioDir + "/demo.json").c_str(), &scenario) == FP_OK);
    for (const char* name : {"a.jsonl", "b.jsonl"}) {
        fp_result* result = nullptr;
        REQUIRE(fp_run(scenario, nullptr, &result) == FP_OK);
        REQUIRE(fp_result_write_trace(result, tmp.file(name).c_str()) == FP_OK);
        fp_result_free(result);
    }
    CHECK(slurp(tmp.path / "a.jsonl") == slurp(tmp.path / "b.jsonl"));

    // A different seed changes the bytes.
    fp_run_options options;
    fp_run_options_init(&options);
    options.seed = 777;
    fp_result* result = nullptr;
    REQUIRE(fp_run(scenario, &options, &result) == FP_OK);
    REQUIRE(fp_result_write_trace(result, tmp.file("c.jsonl").c_str()) == FP_OK);
    fp_result_free(result);
    CHECK(slurp(tmp.path / "a.jsonl") != slurp(tmp.path / "c.jsonl"));
    fp_scenario_free(scenario);
}

TEST_CASE("config overrides pass through") {
    fp_scenario* scenario = nullptr;
    REQUIRE(fp_scenario_parse(R"({"duration_ms": 1500, "seed": 6, "actors": [
        {"actor_id": 1, "path": {"kind": "linear", "start": [80, 50]},
         "box_size": [56, 72], "true_age": 30, "true_gender": "female"}]})",
                              &scenario) == FP_OK);

    fp_run_options options;
    fp_run_options_init(&options);
    options.visualization_rate = 50.0;
    options.expression_every = 2;
    fp_result* result = nullptr;
    REQUIRE(fp_run(scenario, &options, &result) == FP_OK);

    TempDir tmp;
    REQUIRE(fp_result_write_metrics(result, tmp.file("metrics.json").c_str()) == FP_OK);
    const std::string metrics = slurp(tmp.path / "metrics.json");
    CHECK(metrics.find("\"ticks\": 75") != std::string::npos); // 1.5 s at 50 Hz
    CHECK(metrics.find("\"achieved_fps\": 50.0") != std::string::npos);
    fp_result_free(result);

    options.buffer_capacity = -3; // non-positive means default
    fp_result* r2 = nullptr;
    CHECK(fp_run(scenario, &options, &r2) == FP_OK);
    fp_result_free(r2);
    fp_scenario_free(scenario);
}

TEST_CASE("frame dumps produce PPM images") {
    TempDir tmp;
    fp_scenario* scenario = nullptr;
    REQUIRE(fp_scenario_parse(R"({"duration_ms": 200, "actors": [
        {"actor_id": 1, "path": {"kind": "linear", "start": [80, 50]},
         "box_size": [56, 72], "true_age": 30, "true_gender": "female"}]})",
                              &scenario) == FP_OK);
    fp_result* result = nullptr;
    REQUIRE(fp_run(scenario, nullptr, &result) == FP_OK);
    REQUIRE(fp_result_dump_frames(result, (tmp.path / "frames").string().c_str()) == FP_OK);
    const auto first = tmp.path / "frames" / "tick_000000.ppm";
    REQUIRE(fs::exists(first));
    const std::string content = slurp(first);
    CHECK(content.rfind("P6\n240 180\n255\n", 0) == 0);
    CHECK(content.size() == 15 + 240u * 180u * 3u);
    fp_result_free(result);
    fp_scenario_free(scenario);
}

TEST_CASE("evaluate rejects corrupt and mismatched traces") {
    TempDir tmp;
    const std::string scenario_path = kScenarioDir + "/empty.json";

    fp_report* report = nullptr;
    CHECK(fp_evaluate("/nonexistent/trace.jsonl", scenario_path.c_str(), &report) ==
          FP_ERROR_IO);

    {
        std::ofstream out(tmp.file("truncated.jsonl"));
        out << R"({"ts":0,"kind":"grab","frame_id":0})" << "\n";
        out << R"({"ts":40000,"kind":"gra)"; // cut mid-record
    }
    CHECK(fp_evaluate(tmp.file("truncated.jsonl").c_str(), scenario_path.c_str(), &report) ==
          FP_ERROR_MISMATCH);
    CHECK(std::strlen(fp_last_error()) > 0);

    {
        std::ofstream out(tmp.file("alien.jsonl"));
        // A detection completion far beyond the scenario's 1 s duration.
        out << R"({"ts":9000000,"kind":"detect_done","frame_id":1,"frame_ts":9000000,)"
            << R"("latency_us":10,"detections":[]})" << "\n";
    }
    CHECK(fp_evaluate(tmp.file("alien.jsonl").c_str(), scenario_path.c_str(), &report) ==
          FP_ERROR_MISMATCH);

    CHECK(fp_evaluate(tmp.file("truncated.jsonl").c_str(), "/nonexistent/scenario.json",
                      &report) == FP_ERROR_IO);
}
