#include "facepipe/trace.hpp"

#include <fstream>

#include "facepipe/error.hpp"

namespace facepipe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {
constexpr const char* kKindNames[] = {
    "grab",      "evict", "checkout",     "detect_done", "landmarks",
    "recognize_done", "track_update", "prune",       "tick",      "drop_noop",
};
constexpr int kKindCount = 10;
} // namespace

const char* to_string(TraceKind k) { return kKindNames[static_cast<int>(k)]; }

std::optional<TraceKind> trace_kind_from_string(std::string_view s) {
    for (int i = 0; i < kKindCount; ++i)
        if (s == kKindNames[i])
            return static_cast<TraceKind>(i);
    return std::nullopt;
}

std::string TraceEvent::to_line() const {
    ordered_json j;
    j["ts"] = ts;
    j["kind"] = to_string(kind);
    for (const auto& [key, value] : payload.items())
        j[key] = value;
    return j.dump();
}

TraceEvent TraceEvent::from_line(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const json::exception& e) {
        throw ParseError(std::string("trace line: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("ts") || !j.contains("kind"))
        throw ParseError("trace line: missing ts/kind");
    TraceEvent e;
    if (!j["ts"].is_number_integer())
        throw ParseError("trace line: ts must be an integer");
    e.ts = j["ts"].get<Timestamp>();
    const auto kind = trace_kind_from_string(j["kind"].get<std::string>());
    if (!kind)
        throw ParseError("trace line: unknown kind '" + j["kind"].get<std::string>() + "'");
    e.kind = *kind;
    j.erase("ts");
    j.erase("kind");
    e.payload = std::move(j);
    return e;
}

void write_trace_jsonl(const std::vector<TraceEvent>& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write trace file: " + path);
    for (const TraceEvent& e : trace)
        out << e.to_line() << "\n";
    if (!out)
        throw IoError("failed writing trace file: " + path);
}

std::vector<TraceEvent> read_trace_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open trace file: " + path);
    std::vector<TraceEvent> trace;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        try {
            trace.push_back(TraceEvent::from_line(line));
        } catch (ParseError& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return trace;
}

ordered_json box_to_json(const BBox& b) { return ordered_json::array({b.x, b.y, b.w, b.h}); }

BBox box_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4)
        throw ParseError("box: expected [x,y,w,h]");
    for (const auto& v : j)
        if (!v.is_number())
            throw ParseError("box: expected numbers");
    return BBox{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

ordered_json AnnotatedFrame::to_json() const {
    ordered_json j;
    j["ts"] = ts;
    if (frame_id)
        j["frame_id"] = *frame_id;
    else
        j["frame_id"] = nullptr;
    ordered_json arr = ordered_json::array();
    for (const AnnotatedTrack& t : tracks) {
        ordered_json jt;
        jt["track_id"] = t.track_id;
        jt["box"] = box_to_json(t.box);
        if (t.age_years)
            jt["age_years"] = *t.age_years;
        if (t.gender) {
            jt["gender"] = to_string(*t.gender);
            jt["gender_p"] = *t.gender_p;
        }
        if (t.expression)
            jt["expression"] = to_string(*t.expression);
        if (t.staleness_us)
            jt["staleness_us"] = *t.staleness_us;
        arr.push_back(jt);
    }
    j["tracks"] = arr;
    return j;
}

AnnotatedFrame AnnotatedFrame::from_json(const json& j) {
    if (!j.is_object() || !j.contains("ts") || !j.contains("tracks"))
        throw ParseError("annotated frame: missing ts/tracks");
    AnnotatedFrame f;
    f.ts = j["ts"].get<Timestamp>();
    if (j.contains("frame_id") && !j["frame_id"].is_null())
        f.frame_id = j["frame_id"].get<std::int64_t>();
    for (const auto& jt : j["tracks"]) {
        AnnotatedTrack t;
        t.track_id = jt.at("track_id").get<std::int64_t>();
        t.box = box_from_json(jt.at("box"));
        if (jt.contains("age_years"))
            t.age_years = jt["age_years"].get<int>();
        if (jt.contains("gender")) {
            t.gender = gender_from_string(jt["gender"].get<std::string>());
            if (jt.contains("gender_p"))
                t.gender_p = jt["gender_p"].get<double>();
        }
        if (jt.contains("expression"))
            t.expression = expression_from_string(jt["expression"].get<std::string>());
        if (jt.contains("staleness_us"))
            t.staleness_us = jt["staleness_us"].get<Timestamp>();
        f.tracks.push_back(t);
    }
    return f;
}

void write_annotated_jsonl(const std::vector<AnnotatedFrame>& frames, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write annotated file: " + path);
    for (const AnnotatedFrame& f : frames)
        out << f.to_json().dump() << "\n";
    if (!out)
        throw IoError("failed writing annotated file: " + path);
}

std::vector<AnnotatedFrame> read_annotated_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open annotated file: " + path);
    std::vector<AnnotatedFrame> frames;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": invalid JSON: " + e.what());
        }
        frames.push_back(AnnotatedFrame::from_json(j));
    }
    return frames;
}

} // namespace facepipe
