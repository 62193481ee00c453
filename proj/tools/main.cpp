// facepipe command line: run scenarios through the pipeline and evaluate
// the traces they produce. Talks to the engine exclusively through the C
// API in facepipe.h.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "facepipe.h"

namespace {

int exit_code_for(fp_status status) {
    switch (status) {
    case FP_OK: return 0;
    case FP_ERROR_PARSE: return 2;
    case FP_ERROR_IO: return 3;
    case FP_ERROR_MISMATCH: return 4;
    default: return 1;
    }
}

int fail(const char* what, fp_status status) {
    std::fprintf(stderr, "facepipe: %s: %s (%s)\n", what, fp_last_error(),
                 fp_status_name(status));
    return exit_code_for(status);
}

std::string default_out_dir() {
    if (const char* env = std::getenv("FACEPIPE_OUT"))
        return env;
    return "out";
}

struct RunArgs {
    std::string scenario_path;
    std::string out_dir = default_out_dir();
    std::string mode = "virtual";
    bool dump_frames = false;
    fp_run_options options{};
    std::string template_path;
};

int cmd_run(const RunArgs& args) {
    fp_scenario* scenario = nullptr;
    fp_status st = fp_scenario_load(args.scenario_path.c_str(), &scenario);
    if (st != FP_OK) {
        // A scenario that cannot be read or parsed is exit 2 either way.
        std::fprintf(stderr, "facepipe: loading scenario: %s\n", fp_last_error());
        return 2;
    }

    fp_run_options options = args.options;
    options.realtime = args.mode == "realtime" ? 1 : 0;
    if (!args.template_path.empty())
        options.face_template_path = args.template_path.c_str();

    fp_result* result = nullptr;
    st = fp_run(scenario, &options, &result);
    fp_scenario_free(scenario);
    if (st != FP_OK)
        return fail("running scenario", st);

    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "facepipe: cannot create output directory %s\n",
                     args.out_dir.c_str());
        fp_result_free(result);
        return 3;
    }
    const auto out = [&](const char* name) {
        return (std::filesystem::path(args.out_dir) / name).string();
    };

    if ((st = fp_result_write_trace(result, out("trace.jsonl").c_str())) != FP_OK ||
        (st = fp_result_write_annotated(result, out("annotated.jsonl").c_str())) != FP_OK ||
        (st = fp_result_write_metrics(result, out("metrics.json").c_str())) != FP_OK) {
        fp_result_free(result);
        return fail("writing outputs", st);
    }
    if (args.dump_frames &&
        (st = fp_result_dump_frames(result, out("frames").c_str())) != FP_OK) {
        fp_result_free(result);
        return fail("dumping frames", st);
    }

    char* summary = nullptr;
    if (fp_result_summary(result, &summary) == FP_OK) {
        std::printf("%s\n", summary);
        fp_string_free(summary);
    }
    fp_result_free(result);
    return 0;
}

struct EvalArgs {
    std::string trace_path;
    std::string scenario_path;
    std::string out_dir = default_out_dir();
};

int cmd_eval(const EvalArgs& args) {
    fp_scenario* probe = nullptr;
    if (fp_scenario_load(args.scenario_path.c_str(), &probe) != FP_OK) {
        std::fprintf(stderr, "facepipe: loading scenario: %s\n", fp_last_error());
        return 2;
    }
    fp_scenario_free(probe);

    fp_report* report = nullptr;
    fp_status st = fp_evaluate(args.trace_path.c_str(), args.scenario_path.c_str(), &report);
    if (st != FP_OK)
        return fail("evaluating trace", st);

    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "facepipe: cannot create output directory %s\n",
                     args.out_dir.c_str());
        fp_report_free(report);
        return 3;
    }
    const auto out = [&](const char* name) {
        return (std::filesystem::path(args.out_dir) / name).string();
    };

    if ((st = fp_report_write_json(report, out("eval.json").c_str())) != FP_OK ||
        (st = fp_report_write_csv(report, out("table.csv").c_str())) != FP_OK) {
        fp_report_free(report);
        return fail("writing report", st);
    }

    char* summary = nullptr;
    if (fp_report_summary(report, &summary) == FP_OK) {
        std::printf("%s\n", summary);
        fp_string_free(summary);
    }
    fp_report_free(report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Real-time face-analysis pipeline simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fp_version()));

    RunArgs run_args;
    fp_run_options_init(&run_args.options);
    CLI::App* run = app.add_subcommand("run", "Run a scenario and write trace/annotated/metrics");
    run->add_option("-s,--scenario", run_args.scenario_path, "Scenario JSON file")->required();
    run->add_option("-o,--out", run_args.out_dir,
                    "Output directory (default $FACEPIPE_OUT or ./out)");
    run->add_option("--mode", run_args.mode, "Clock mode")
        ->check(CLI::IsMember({"virtual", "realtime"}));
    run->add_option("--seed", run_args.options.seed, "Override the scenario seed");
    run->add_option("--frame-rate", run_args.options.frame_rate, "Override the grabber rate");
    run->add_option("--vis-rate", run_args.options.visualization_rate,
                    "Visualization tick rate");
    run->add_option("--buffer-capacity", run_args.options.buffer_capacity,
                    "Frame buffer capacity");
    run->add_option("--window", run_args.options.aggregation_window,
                    "Attribute smoothing window");
    run->add_option("--max-match-distance", run_args.options.tracker_max_match_distance,
                    "Tracker gate as a fraction of the frame diagonal");
    run->add_option("--expiry-misses", run_args.options.tracker_expiry_misses,
                    "Tracker expiry threshold");
    run->add_option("--expression-every", run_args.options.expression_every,
                    "Expression cadence");
    run->add_option("--age-every", run_args.options.age_every, "Age cadence");
    run->add_option("--gender-every", run_args.options.gender_every, "Gender cadence");
    run->add_option("--template", run_args.template_path, "Face template file");
    run->add_flag("--dump-frames", run_args.dump_frames, "Write one PPM per tick");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a trace against its scenario");
    eval->add_option("-t,--trace", eval_args.trace_path, "Trace JSONL file")->required();
    eval->add_option("-s,--scenario", eval_args.scenario_path, "Scenario JSON file")->required();
    eval->add_option("-o,--out", eval_args.out_dir,
                     "Output directory (default $FACEPIPE_OUT or ./out)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return cmd_run(run_args);
    return cmd_eval(eval_args);
}
