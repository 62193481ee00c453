#include "facepipe/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "facepipe/error.hpp"

namespace facepipe {

using nlohmann::json;
using nlohmann::ordered_json;

double LatencyModel::sample_ms(Rng& rng) const {
    double v = 0.0;
    switch (kind) {
    case Kind::constant: v = a_ms; break;
    case Kind::uniform: v = rng.uniform(a_ms, b_ms); break;
    case Kind::normal: v = rng.normal(a_ms, b_ms); break;
    }
    return std::max(0.0, v);
}

void LatencyModel::validate(const std::string& where) const {
    switch (kind) {
    case Kind::constant:
        if (a_ms < 0.0)
            throw ParseError(where + ": constant latency must be >= 0");
        break;
    case Kind::uniform:
        if (a_ms < 0.0 || b_ms < a_ms)
            throw ParseError(where + ": uniform latency needs 0 <= lo <= hi");
        break;
    case Kind::normal:
        if (b_ms < 0.0)
            throw ParseError(where + ": normal latency sigma must be >= 0");
        break;
    }
}

Vec2 PathSpec::topleft_at(Timestamp ts) const {
    const double t = static_cast<double>(ts) / static_cast<double>(kMicrosPerSecond);
    Vec2 p{start.x + velocity_px_s.x * t, start.y + velocity_px_s.y * t};
    if (kind == Kind::sinusoidal) {
        const double period_s = static_cast<double>(period) / static_cast<double>(kMicrosPerSecond);
        p.y += amplitude_px * std::sin(2.0 * M_PI * t / period_s);
    }
    return p;
}

Expression ActorSpec::expression_at(Timestamp ts) const {
    Expression e = expression_timeline.empty() ? Expression::neutral
                                               : expression_timeline.front().second;
    for (const auto& [at, cls] : expression_timeline) {
        if (at <= ts)
            e = cls;
        else
            break;
    }
    return e;
}

double RecognizerModel::latency_ms_of(Task t, Rng& rng) const {
    switch (t) {
    case Task::age: return age_latency.sample_ms(rng);
    case Task::gender: return gender_latency.sample_ms(rng);
    case Task::expression: return expression_latency.sample_ms(rng);
    }
    return 0.0;
}

namespace {

/// Wraps a JSON object and rejects keys nobody asked for.
class StrictObject {
public:
    StrictObject(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object())
            throw ParseError(where_ + ": expected an object");
    }

    ~StrictObject() = default;

    const json* get(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& require(const char* key) {
        const json* v = get(key);
        if (!v)
            throw ParseError(where_ + ": missing required key '" + key + "'");
        return *v;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ParseError(where_ + ": unknown key '" + it.key() + "'");
    }

    const std::string& where() const { return where_; }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

double as_number(const json& v, const std::string& where) {
    if (!v.is_number())
        throw ParseError(where + ": expected a number");
    return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer())
        throw ParseError(where + ": expected an integer");
    return v.get<std::int64_t>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string())
        throw ParseError(where + ": expected a string");
    return v.get<std::string>();
}

Timestamp as_ms(const json& v, const std::string& where) {
    const double ms = as_number(v, where);
    if (!std::isfinite(ms))
        throw ParseError(where + ": non-finite duration");
    return ms_to_us(ms);
}

Vec2 as_vec2(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2)
        throw ParseError(where + ": expected [x, y]");
    return {as_number(v[0], where), as_number(v[1], where)};
}

LatencyModel parse_latency(const json& j, const std::string& where) {
    StrictObject o(j, where);
    const std::string kind = as_string(o.require("kind"), where + ".kind");
    LatencyModel m;
    if (kind == "constant") {
        m.kind = LatencyModel::Kind::constant;
        m.a_ms = as_number(o.require("ms"), where + ".ms");
    } else if (kind == "uniform") {
        m.kind = LatencyModel::Kind::uniform;
        m.a_ms = as_number(o.require("lo_ms"), where + ".lo_ms");
        m.b_ms = as_number(o.require("hi_ms"), where + ".hi_ms");
    } else if (kind == "normal") {
        m.kind = LatencyModel::Kind::normal;
        m.a_ms = as_number(o.require("mean_ms"), where + ".mean_ms");
        m.b_ms = as_number(o.require("sigma_ms"), where + ".sigma_ms");
    } else {
        throw ParseError(where + ": unknown latency kind '" + kind + "'");
    }
    o.finish();
    m.validate(where);
    return m;
}

PathSpec parse_path(const json& j, const std::string& where) {
    StrictObject o(j, where);
    PathSpec p;
    const std::string kind = as_string(o.require("kind"), where + ".kind");
    if (kind == "linear")
        p.kind = PathSpec::Kind::linear;
    else if (kind == "sinusoidal")
        p.kind = PathSpec::Kind::sinusoidal;
    else
        throw ParseError(where + ": unknown path kind '" + kind + "'");
    p.start = as_vec2(o.require("start"), where + ".start");
    if (const json* v = o.get("velocity_px_s"))
        p.velocity_px_s = as_vec2(*v, where + ".velocity_px_s");
    if (p.kind == PathSpec::Kind::sinusoidal) {
        p.amplitude_px = as_number(o.require("amplitude_px"), where + ".amplitude_px");
        if (const json* v = o.get("period_ms")) {
            p.period = as_ms(*v, where + ".period_ms");
            if (p.period <= 0)
                throw ParseError(where + ".period_ms: must be > 0");
        }
    }
    o.finish();
    return p;
}

ActorSpec parse_actor(const json& j, const std::string& where, Timestamp duration) {
    StrictObject o(j, where);
    ActorSpec a;
    a.actor_id = as_int(o.require("actor_id"), where + ".actor_id");
    a.path = parse_path(o.require("path"), where + ".path");
    if (const json* v = o.get("box_size")) {
        const Vec2 s = as_vec2(*v, where + ".box_size");
        a.box_w = s.x;
        a.box_h = s.y;
    }
    if (const json* v = o.get("enter_ms"))
        a.enter_ts = as_ms(*v, where + ".enter_ms");
    a.exit_ts = duration;
    if (const json* v = o.get("exit_ms"))
        a.exit_ts = as_ms(*v, where + ".exit_ms");
    if (const json* v = o.get("true_age"))
        a.true_age = as_number(*v, where + ".true_age");
    if (const json* v = o.get("true_gender")) {
        const std::string g = as_string(*v, where + ".true_gender");
        auto parsed = gender_from_string(g);
        if (!parsed)
            throw ParseError(where + ".true_gender: expected 'female' or 'male'");
        a.true_gender = *parsed;
    }
    if (const json* v = o.get("expression_timeline")) {
        if (!v->is_array())
            throw ParseError(where + ".expression_timeline: expected an array");
        for (std::size_t i = 0; i < v->size(); ++i) {
            const json& e = (*v)[i];
            const std::string ew = where + ".expression_timeline[" + std::to_string(i) + "]";
            if (!e.is_array() || e.size() != 2)
                throw ParseError(ew + ": expected [ms, class]");
            const Timestamp at = as_ms(e[0], ew);
            auto cls = expression_from_string(as_string(e[1], ew));
            if (!cls)
                throw ParseError(ew + ": unknown expression class");
            a.expression_timeline.emplace_back(at, *cls);
        }
    }
    if (a.expression_timeline.empty())
        a.expression_timeline.emplace_back(0, Expression::neutral);
    o.finish();
    return a;
}

ConfidenceModel parse_confidence(const json& j, const std::string& where) {
    StrictObject o(j, where);
    ConfidenceModel m;
    m.mean = as_number(o.require("mean"), where + ".mean");
    if (const json* v = o.get("sigma"))
        m.sigma = as_number(*v, where + ".sigma");
    o.finish();
    if (m.sigma < 0.0)
        throw ParseError(where + ".sigma: must be >= 0");
    return m;
}

DetectorModel parse_detector(const json& j, const std::string& where) {
    StrictObject o(j, where);
    DetectorModel m;
    if (const json* v = o.get("latency"))
        m.latency = parse_latency(*v, where + ".latency");
    if (const json* v = o.get("center_jitter_sigma_px"))
        m.center_jitter_sigma_px = as_number(*v, where + ".center_jitter_sigma_px");
    if (const json* v = o.get("size_jitter_sigma_px"))
        m.size_jitter_sigma_px = as_number(*v, where + ".size_jitter_sigma_px");
    if (const json* v = o.get("miss_prob"))
        m.miss_prob = as_number(*v, where + ".miss_prob");
    if (const json* v = o.get("false_positive_rate"))
        m.false_positive_rate = as_number(*v, where + ".false_positive_rate");
    if (const json* v = o.get("confidence_true"))
        m.confidence_true = parse_confidence(*v, where + ".confidence_true");
    if (const json* v = o.get("confidence_false"))
        m.confidence_false = parse_confidence(*v, where + ".confidence_false");
    o.finish();
    if (m.center_jitter_sigma_px < 0.0 || m.size_jitter_sigma_px < 0.0)
        throw ParseError(where + ": jitter sigmas must be >= 0");
    if (m.miss_prob < 0.0 || m.miss_prob > 1.0)
        throw ParseError(where + ".miss_prob: must be in [0,1]");
    if (m.false_positive_rate < 0.0)
        throw ParseError(where + ".false_positive_rate: must be >= 0");
    return m;
}

RecognizerModel parse_recognizer(const json& j, const std::string& where) {
    StrictObject o(j, where);
    RecognizerModel m;
    if (const json* v = o.get("age_latency"))
        m.age_latency = parse_latency(*v, where + ".age_latency");
    if (const json* v = o.get("gender_latency"))
        m.gender_latency = parse_latency(*v, where + ".gender_latency");
    if (const json* v = o.get("expression_latency"))
        m.expression_latency = parse_latency(*v, where + ".expression_latency");
    if (const json* v = o.get("age_noise_sigma"))
        m.age_noise_sigma = as_number(*v, where + ".age_noise_sigma");
    if (const json* v = o.get("gender_flip_prob"))
        m.gender_flip_prob = as_number(*v, where + ".gender_flip_prob");
    if (const json* v = o.get("expression_confusion")) {
        if (v->is_string()) {
            if (v->get<std::string>() != "identity")
                throw ParseError(where + ".expression_confusion: expected 'identity' or 7x7 rows");
        } else {
            if (!v->is_array() || v->size() != kExpressionCount)
                throw ParseError(where + ".expression_confusion: expected 7 rows");
            std::array<std::array<double, kExpressionCount>, kExpressionCount> c{};
            for (int r = 0; r < kExpressionCount; ++r) {
                const json& row = (*v)[static_cast<std::size_t>(r)];
                const std::string rw =
                    where + ".expression_confusion[" + std::to_string(r) + "]";
                if (!row.is_array() || row.size() != kExpressionCount)
                    throw ParseError(rw + ": expected 7 entries");
                double sum = 0.0;
                for (int k = 0; k < kExpressionCount; ++k) {
                    const double p = as_number(row[static_cast<std::size_t>(k)], rw);
                    if (p < 0.0)
                        throw ParseError(rw + ": entries must be >= 0");
                    c[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = p;
                    sum += p;
                }
                if (std::abs(sum - 1.0) > 1e-9)
                    throw ParseError(rw + ": row must sum to 1");
            }
            m.expression_confusion = c;
        }
    }
    o.finish();
    if (m.age_noise_sigma < 0.0)
        throw ParseError(where + ".age_noise_sigma: must be >= 0");
    if (m.gender_flip_prob < 0.0 || m.gender_flip_prob > 1.0)
        throw ParseError(where + ".gender_flip_prob: must be in [0,1]");
    return m;
}

LandmarkModel parse_landmarks(const json& j, const std::string& where) {
    StrictObject o(j, where);
    LandmarkModel m;
    if (const json* v = o.get("noise_sigma_px"))
        m.noise_sigma_px = as_number(*v, where + ".noise_sigma_px");
    if (const json* v = o.get("max_rotation_rad"))
        m.max_rotation_rad = as_number(*v, where + ".max_rotation_rad");
    o.finish();
    if (m.noise_sigma_px < 0.0 || m.max_rotation_rad < 0.0)
        throw ParseError(where + ": landmark parameters must be >= 0");
    return m;
}

CadencePolicy parse_cadence(const json& j, const std::string& where) {
    StrictObject o(j, where);
    CadencePolicy p;
    if (const json* v = o.get("expression_every"))
        p.expression_every = static_cast<int>(as_int(*v, where + ".expression_every"));
    if (const json* v = o.get("age_every"))
        p.age_every = static_cast<int>(as_int(*v, where + ".age_every"));
    if (const json* v = o.get("gender_every"))
        p.gender_every = static_cast<int>(as_int(*v, where + ".gender_every"));
    o.finish();
    if (!p.valid())
        throw ParseError(where + ": cadence periods must be >= 1");
    return p;
}

json latency_to_json(const LatencyModel& m) {
    ordered_json j;
    switch (m.kind) {
    case LatencyModel::Kind::constant:
        j["kind"] = "constant";
        j["ms"] = m.a_ms;
        break;
    case LatencyModel::Kind::uniform:
        j["kind"] = "uniform";
        j["lo_ms"] = m.a_ms;
        j["hi_ms"] = m.b_ms;
        break;
    case LatencyModel::Kind::normal:
        j["kind"] = "normal";
        j["mean_ms"] = m.a_ms;
        j["sigma_ms"] = m.b_ms;
        break;
    }
    return j;
}

} // namespace

Scenario Scenario::from_json(const json& j) {
    StrictObject o(j, "scenario");
    Scenario s;
    s.duration = as_ms(o.require("duration_ms"), "scenario.duration_ms");
    if (const json* v = o.get("frame_rate"))
        s.frame_rate = as_number(*v, "scenario.frame_rate");
    if (const json* v = o.get("frame_size")) {
        const Vec2 sz = as_vec2(*v, "scenario.frame_size");
        s.frame_width = static_cast<int>(sz.x);
        s.frame_height = static_cast<int>(sz.y);
    }
    if (const json* v = o.get("seed")) {
        const std::int64_t seed = as_int(*v, "scenario.seed");
        if (seed < 0)
            throw ParseError("scenario.seed: must be >= 0");
        s.seed = static_cast<std::uint64_t>(seed);
    }
    if (const json* v = o.get("cadence"))
        s.cadence = parse_cadence(*v, "scenario.cadence");
    if (const json* v = o.get("actors")) {
        if (!v->is_array())
            throw ParseError("scenario.actors: expected an array");
        for (std::size_t i = 0; i < v->size(); ++i)
            s.actors.push_back(
                parse_actor((*v)[i], "scenario.actors[" + std::to_string(i) + "]", s.duration));
    }
    if (const json* v = o.get("detector"))
        s.detector = parse_detector(*v, "scenario.detector");
    if (const json* v = o.get("recognizer"))
        s.recognizer = parse_recognizer(*v, "scenario.recognizer");
    if (const json* v = o.get("landmarks"))
        s.landmarks = parse_landmarks(*v, "scenario.landmarks");
    o.finish();
    s.validate();
    return s;
}

Scenario Scenario::parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
    }
    return from_json(j);
}

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str());
    } catch (ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void Scenario::validate() const {
    if (duration <= 0)
        throw ParseError("scenario.duration_ms: must be > 0");
    if (frame_rate <= 0.0)
        throw ParseError("scenario.frame_rate: must be > 0");
    if (frame_width <= 0 || frame_height <= 0)
        throw ParseError("scenario.frame_size: must be positive");
    for (std::size_t i = 0; i < actors.size(); ++i) {
        const ActorSpec& a = actors[i];
        const std::string where = "scenario.actors[" + std::to_string(i) + "]";
        if (a.actor_id < 0)
            throw ParseError(where + ".actor_id: must be >= 0");
        if (a.box_w <= 0.0 || a.box_h <= 0.0)
            throw ParseError(where + ".box_size: must be positive");
        if (a.box_w > frame_width || a.box_h > frame_height)
            throw ParseError(where + ".box_size: larger than the frame");
        if (a.enter_ts < 0 || a.enter_ts >= a.exit_ts || a.exit_ts > duration)
            throw ParseError(where + ": need 0 <= enter_ms < exit_ms <= duration_ms");
        for (std::size_t k = 1; k < a.expression_timeline.size(); ++k)
            if (a.expression_timeline[k].first < a.expression_timeline[k - 1].first)
                throw ParseError(where + ".expression_timeline: timestamps must be ascending");
    }
    // Re-entry of the same actor id is allowed (separate segments), but
    // active windows must not overlap.
    for (std::size_t i = 0; i < actors.size(); ++i)
        for (std::size_t k = i + 1; k < actors.size(); ++k)
            if (actors[i].actor_id == actors[k].actor_id &&
                actors[i].enter_ts < actors[k].exit_ts && actors[k].enter_ts < actors[i].exit_ts)
                throw ParseError("scenario.actors: actor " + std::to_string(actors[i].actor_id) +
                                 " has overlapping active windows");
    if (cadence && !cadence->valid())
        throw ParseError("scenario.cadence: periods must be >= 1");
}

nlohmann::ordered_json Scenario::to_json() const {
    ordered_json j;
    j["duration_ms"] = us_to_ms(duration);
    j["frame_rate"] = frame_rate;
    j["frame_size"] = {frame_width, frame_height};
    j["seed"] = seed;
    if (cadence) {
        j["cadence"] = {{"expression_every", cadence->expression_every},
                        {"age_every", cadence->age_every},
                        {"gender_every", cadence->gender_every}};
    }
    j["actors"] = ordered_json::array();
    for (const ActorSpec& a : actors) {
        ordered_json ja;
        ja["actor_id"] = a.actor_id;
        ordered_json jp;
        jp["kind"] = a.path.kind == PathSpec::Kind::linear ? "linear" : "sinusoidal";
        jp["start"] = {a.path.start.x, a.path.start.y};
        jp["velocity_px_s"] = {a.path.velocity_px_s.x, a.path.velocity_px_s.y};
        if (a.path.kind == PathSpec::Kind::sinusoidal) {
            jp["amplitude_px"] = a.path.amplitude_px;
            jp["period_ms"] = us_to_ms(a.path.period);
        }
        ja["path"] = jp;
        ja["box_size"] = {a.box_w, a.box_h};
        ja["enter_ms"] = us_to_ms(a.enter_ts);
        ja["exit_ms"] = us_to_ms(a.exit_ts);
        ja["true_age"] = a.true_age;
        ja["true_gender"] = to_string(a.true_gender);
        ordered_json tl = ordered_json::array();
        for (const auto& [at, cls] : a.expression_timeline)
            tl.push_back({us_to_ms(at), to_string(cls)});
        ja["expression_timeline"] = tl;
        j["actors"].push_back(ja);
    }
    ordered_json jd;
    jd["latency"] = latency_to_json(detector.latency);
    jd["center_jitter_sigma_px"] = detector.center_jitter_sigma_px;
    jd["size_jitter_sigma_px"] = detector.size_jitter_sigma_px;
    jd["miss_prob"] = detector.miss_prob;
    jd["false_positive_rate"] = detector.false_positive_rate;
    jd["confidence_true"] = {{"mean", detector.confidence_true.mean},
                             {"sigma", detector.confidence_true.sigma}};
    jd["confidence_false"] = {{"mean", detector.confidence_false.mean},
                              {"sigma", detector.confidence_false.sigma}};
    j["detector"] = jd;
    ordered_json jr;
    jr["age_latency"] = latency_to_json(recognizer.age_latency);
    jr["gender_latency"] = latency_to_json(recognizer.gender_latency);
    jr["expression_latency"] = latency_to_json(recognizer.expression_latency);
    jr["age_noise_sigma"] = recognizer.age_noise_sigma;
    jr["gender_flip_prob"] = recognizer.gender_flip_prob;
    if (recognizer.expression_confusion) {
        ordered_json rows = ordered_json::array();
        for (const auto& row : *recognizer.expression_confusion)
            rows.push_back(row);
        jr["expression_confusion"] = rows;
    } else {
        jr["expression_confusion"] = "identity";
    }
    j["recognizer"] = jr;
    j["landmarks"] = {{"noise_sigma_px", landmarks.noise_sigma_px},
                      {"max_rotation_rad", landmarks.max_rotation_rad}};
    return j;
}

} // namespace facepipe
