#include "facepipe.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>

#include "facepipe/error.hpp"
#include "facepipe/evaluation.hpp"
#include "facepipe/ppm.hpp"
#include "facepipe/runtime.hpp"

using namespace facepipe;

struct fp_scenario {
    Scenario impl;
};

struct fp_result {
    RunResult impl;
    int frame_width = 0;
    int frame_height = 0;
};

struct fp_report {
    EvalReport impl;
};

namespace {

thread_local std::string g_last_error = "";

void set_error(const std::string& msg) { g_last_error = msg; }

fp_status status_of(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e))
        return FP_ERROR_PARSE;
    if (dynamic_cast<const IoError*>(&e))
        return FP_ERROR_IO;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidInput*>(&e) ||
        dynamic_cast<const ContractViolation*>(&e))
        return FP_ERROR_INVALID_ARGUMENT;
    return FP_ERROR_INTERNAL;
}

template <typename Fn>
fp_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        set_error(e.what());
        return status_of(e);
    } catch (...) {
        set_error("unknown error");
        return FP_ERROR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

fp_status require(bool cond, const char* msg) {
    if (cond)
        return FP_OK;
    set_error(msg);
    return FP_ERROR_INVALID_ARGUMENT;
}

fp_status write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write file: " + path);
    out << text;
    if (!out)
        throw IoError("failed writing file: " + path);
    return FP_OK;
}

} // namespace

extern "C" {

const char* fp_version(void) { return "0.1.0"; }

const char* fp_status_name(fp_status status) {
    switch (status) {
    case FP_OK: return "ok";
    case FP_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case FP_ERROR_PARSE: return "parse_error";
    case FP_ERROR_IO: return "io_error";
    case FP_ERROR_MISMATCH: return "mismatch";
    case FP_ERROR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* fp_last_error(void) { return g_last_error.c_str(); }

void fp_string_free(char* s) { delete[] s; }

fp_status fp_scenario_load(const char* path, fp_scenario** out) {
    if (fp_status s = require(path && out, "fp_scenario_load: null argument"))
        return s;
    return guarded([&] {
        auto handle = std::make_unique<fp_scenario>();
        handle->impl = Scenario::load(path);
        *out = handle.release();
        return FP_OK;
    });
}

fp_status fp_scenario_parse(const char* json_text, fp_scenario** out) {
    if (fp_status s = require(json_text && out, "fp_scenario_parse: null argument"))
        return s;
    return guarded([&] {
        auto handle = std::make_unique<fp_scenario>();
        handle->impl = Scenario::parse(json_text);
        *out = handle.release();
        return FP_OK;
    });
}

void fp_scenario_free(fp_scenario* scenario) { delete scenario; }

void fp_run_options_init(fp_run_options* options) {
    if (!options)
        return;
    options->realtime = 0;
    options->seed = -1;
    options->frame_rate = 0.0;
    options->visualization_rate = 0.0;
    options->buffer_capacity = 0;
    options->aggregation_window = 0;
    options->tracker_max_match_distance = 0.0;
    options->tracker_expiry_misses = 0;
    options->expression_every = 0;
    options->age_every = 0;
    options->gender_every = 0;
    options->face_template_path = nullptr;
}

fp_status fp_run(const fp_scenario* scenario, const fp_run_options* options, fp_result** out) {
    if (fp_status s = require(scenario && out, "fp_run: null argument"))
        return s;
    return guarded([&] {
        PipelineConfig config;
        if (options) {
            config.clock_mode =
                options->realtime ? ClockMode::realtime : ClockMode::virtual_clock;
            if (options->seed >= 0)
                config.seed_override = static_cast<std::uint64_t>(options->seed);
            if (options->frame_rate > 0.0)
                config.frame_rate = options->frame_rate;
            if (options->visualization_rate > 0.0)
                config.visualization_rate = options->visualization_rate;
            if (options->buffer_capacity > 0)
                config.buffer_capacity = static_cast<std::size_t>(options->buffer_capacity);
            if (options->aggregation_window > 0)
                config.aggregation_window = static_cast<std::size_t>(options->aggregation_window);
            if (options->tracker_max_match_distance > 0.0)
                config.tracker.max_match_distance = options->tracker_max_match_distance;
            if (options->tracker_expiry_misses > 0)
                config.tracker.expiry_misses = options->tracker_expiry_misses;
            if (options->expression_every > 0 || options->age_every > 0 ||
                options->gender_every > 0) {
                CadencePolicy cadence = scenario->impl.cadence.value_or(CadencePolicy{});
                if (options->expression_every > 0)
                    cadence.expression_every = options->expression_every;
                if (options->age_every > 0)
                    cadence.age_every = options->age_every;
                if (options->gender_every > 0)
                    cadence.gender_every = options->gender_every;
                config.cadence = cadence;
            }
            if (options->face_template_path)
                config.face_template = FaceTemplate::load(options->face_template_path);
        }
        auto handle = std::make_unique<fp_result>();
        handle->impl = run(scenario->impl, config);
        handle->frame_width = scenario->impl.frame_width;
        handle->frame_height = scenario->impl.frame_height;
        *out = handle.release();
        return FP_OK;
    });
}

void fp_result_free(fp_result* result) { delete result; }

fp_status fp_result_write_trace(const fp_result* result, const char* path) {
    if (fp_status s = require(result && path, "fp_result_write_trace: null argument"))
        return s;
    return guarded([&] {
        write_trace_jsonl(result->impl.trace, path);
        return FP_OK;
    });
}

fp_status fp_result_write_annotated(const fp_result* result, const char* path) {
    if (fp_status s = require(result && path, "fp_result_write_annotated: null argument"))
        return s;
    return guarded([&] {
        write_annotated_jsonl(result->impl.annotated, path);
        return FP_OK;
    });
}

fp_status fp_result_write_metrics(const fp_result* result, const char* path) {
    if (fp_status s = require(result && path, "fp_result_write_metrics: null argument"))
        return s;
    return guarded([&] {
        return write_text(path, result->impl.summary.to_json().dump(2) + "\n");
    });
}

fp_status fp_result_dump_frames(const fp_result* result, const char* dir) {
    if (fp_status s = require(result && dir, "fp_result_dump_frames: null argument"))
        return s;
    return guarded([&] {
        dump_frames(result->impl.annotated, result->frame_width, result->frame_height, dir);
        return FP_OK;
    });
}

fp_status fp_result_summary(const fp_result* result, char** out) {
    if (fp_status s = require(result && out, "fp_result_summary: null argument"))
        return s;
    return guarded([&] {
        const RunSummary& sum = result->impl.summary;
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "fps=%.2f frames=%lld tracks=%lld drops=%lld "
                      "mean_face_recognition_ms=%.1f",
                      sum.achieved_fps, static_cast<long long>(sum.frames_grabbed),
                      static_cast<long long>(sum.tracks_created),
                      static_cast<long long>(sum.drop_count), sum.mean_face_recognition_ms);
        *out = dup_string(buf);
        return *out ? FP_OK : FP_ERROR_INTERNAL;
    });
}

fp_status fp_evaluate(const char* trace_path, const char* scenario_path, fp_report** out) {
    if (fp_status s = require(trace_path && scenario_path && out, "fp_evaluate: null argument"))
        return s;
    Scenario scenario;
    const fp_status loaded = guarded([&] {
        scenario = Scenario::load(scenario_path);
        return FP_OK;
    });
    if (loaded != FP_OK)
        return loaded;
    // Anything wrong with the trace itself, or a trace that does not
    // belong to this scenario, reads as a mismatch.
    try {
        const auto trace = read_trace_jsonl(trace_path);
        auto handle = std::make_unique<fp_report>();
        handle->impl = evaluate(trace, scenario);
        *out = handle.release();
        return FP_OK;
    } catch (const IoError& e) {
        set_error(e.what());
        return FP_ERROR_IO;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FP_ERROR_MISMATCH;
    }
}

void fp_report_free(fp_report* report) { delete report; }

fp_status fp_report_write_json(const fp_report* report, const char* path) {
    if (fp_status s = require(report && path, "fp_report_write_json: null argument"))
        return s;
    return guarded([&] { return write_text(path, report->impl.to_json().dump(2) + "\n"); });
}

fp_status fp_report_write_csv(const fp_report* report, const char* path) {
    if (fp_status s = require(report && path, "fp_report_write_csv: null argument"))
        return s;
    return guarded([&] { return write_text(path, report->impl.to_csv()); });
}

fp_status fp_report_summary(const fp_report* report, char** out) {
    if (fp_status s = require(report && out, "fp_report_summary: null argument"))
        return s;
    return guarded([&] {
        const EvalReport& r = report->impl;
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "AP@0.5IoU=%.3f age_mae=%.2fy gender_acc=%.3f expression_acc=%.3f "
                      "switches=%lld",
                      r.detection_ap, r.age_mae_years, r.gender_accuracy, r.expression_accuracy,
                      static_cast<long long>(r.identity_switches));
        *out = dup_string(buf);
        return *out ? FP_OK : FP_ERROR_INTERNAL;
    });
}

} // extern "C"
