#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "facepipe/types.hpp"

namespace facepipe {

/// Every pipeline action leaves one of these; the trace is the unit of
/// replay, evaluation and regression testing.
enum class TraceKind {
    grab,
    evict,
    checkout,
    detect_done,
    landmarks,
    recognize_done,
    track_update,
    prune,
    tick,
    drop_noop,
};

const char* to_string(TraceKind k);
std::optional<TraceKind> trace_kind_from_string(std::string_view s);

struct TraceEvent {
    Timestamp ts = 0;
    TraceKind kind = TraceKind::grab;
    /// Kind-specific fields, flattened next to ts/kind on the wire.
    nlohmann::ordered_json payload = nlohmann::ordered_json::object();

    /// One JSON object per line, field order fixed: ts, kind, payload...
    std::string to_line() const;
    static TraceEvent from_line(const std::string& line); // throws ParseError
};

void write_trace_jsonl(const std::vector<TraceEvent>& trace, const std::string& path);
std::vector<TraceEvent> read_trace_jsonl(const std::string& path);

struct AnnotatedTrack {
    std::int64_t track_id = 0;
    BBox box;
    std::optional<int> age_years; // rounded for display
    std::optional<Gender> gender;
    std::optional<double> gender_p;
    std::optional<Expression> expression;
    std::optional<Timestamp> staleness_us;
};

/// What the visualization shows at one tick.
struct AnnotatedFrame {
    Timestamp ts = 0;
    std::optional<std::int64_t> frame_id;
    std::vector<AnnotatedTrack> tracks;

    nlohmann::ordered_json to_json() const;
    static AnnotatedFrame from_json(const nlohmann::json& j); // throws ParseError
};

void write_annotated_jsonl(const std::vector<AnnotatedFrame>& frames, const std::string& path);
std::vector<AnnotatedFrame> read_annotated_jsonl(const std::string& path);

nlohmann::ordered_json box_to_json(const BBox& b);
BBox box_from_json(const nlohmann::json& j); // throws ParseError

} // namespace facepipe
