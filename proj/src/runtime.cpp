#include "facepipe/runtime.hpp"

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <thread>
#include <variant>

#include "controller.hpp"
#include "facepipe/error.hpp"

namespace facepipe {

using detail::Controller;
using detail::DetectionJob;
using detail::DetectionOutcome;
using detail::RecognitionJob;
using detail::RecognitionOutcome;
using detail::ResolvedConfig;

void PipelineConfig::validate() const {
    if (frame_rate && *frame_rate <= 0.0)
        throw ConfigError("frame rate must be > 0");
    if (visualization_rate <= 0.0)
        throw ConfigError("visualization rate must be > 0");
    if (buffer_capacity == 0)
        throw ConfigError("buffer capacity must be >= 1");
    if (!tracker.valid())
        throw ConfigError("tracker config invalid: gate > 0, expiry >= 1");
    if (cadence && !cadence->valid())
        throw ConfigError("cadence periods must be >= 1");
    if (aggregation_window == 0)
        throw ConfigError("aggregation window must be >= 1");
    if (face_template && !face_template->valid())
        throw ConfigError("face template needs >= 2 distinct points");
}

nlohmann::ordered_json RunSummary::to_json() const {
    nlohmann::ordered_json j;
    j["achieved_fps"] = achieved_fps;
    j["ticks"] = ticks;
    j["frames_grabbed"] = frames_grabbed;
    j["frames_detected"] = frames_detected;
    j["recognition_passes"] = recognition_passes;
    j["faces_recognized"] = faces_recognized;
    j["tracks_created"] = tracks_created;
    j["drop_count"] = drop_count;
    j["mean_face_recognition_ms"] = mean_face_recognition_ms;
    j["mean_staleness_ms"] = mean_staleness_ms;
    j["p95_staleness_ms"] = p95_staleness_ms;
    return j;
}

namespace {

Frame make_frame(const Scenario& scenario, std::int64_t id, Timestamp ts) {
    Frame f;
    f.id = id;
    f.timestamp = ts;
    f.width = scenario.frame_width;
    f.height = scenario.frame_height;
    return f;
}

// ---------------------------------------------------------------------------
// Virtual clock: a single-threaded event loop over a (ts, seq) priority
// queue. Worker latencies become scheduled completion events; results are
// precomputed at dispatch, which is sound because the worker bodies are
// pure functions of their job.

struct GrabEvent {
    std::int64_t frame_id;
};
struct TickEvent {
    std::int64_t index;
};
struct DetectDoneEvent {
    DetectionJob job;
    DetectionOutcome outcome;
};
struct RecognizeDoneEvent {
    RecognitionJob job;
    RecognitionOutcome outcome;
};

struct VirtualEvent {
    Timestamp ts;
    std::uint64_t seq;
    std::variant<GrabEvent, TickEvent, DetectDoneEvent, RecognizeDoneEvent> body;
};

struct VirtualEventAfter {
    bool operator()(const VirtualEvent& a, const VirtualEvent& b) const {
        if (a.ts != b.ts)
            return a.ts > b.ts;
        return a.seq > b.seq;
    }
};

RunResult run_virtual(const Scenario& scenario, const ResolvedConfig& rc) {
    Controller ctrl(scenario, rc);
    std::priority_queue<VirtualEvent, std::vector<VirtualEvent>, VirtualEventAfter> queue;
    std::uint64_t seq = 0;

    for (std::int64_t i = 0;; ++i) {
        const Timestamp ts = detail::schedule_at(i, rc.frame_rate);
        if (ts >= scenario.duration)
            break;
        queue.push({ts, seq++, GrabEvent{i}});
    }
    for (std::int64_t i = 0;; ++i) {
        const Timestamp ts = detail::schedule_at(i, rc.visualization_rate);
        if (ts >= scenario.duration)
            break;
        queue.push({ts, seq++, TickEvent{i}});
    }

    auto handle_dispatch = [&](Timestamp now, Controller::Dispatch d) {
        if (d.detection) {
            DetectionOutcome outcome = detail::perform_detection(scenario, rc, *d.detection);
            const Timestamp done = now + outcome.latency_us;
            queue.push({done, seq++, DetectDoneEvent{*d.detection, std::move(outcome)}});
        }
        if (d.recognition) {
            RecognitionOutcome outcome = detail::perform_recognition(scenario, rc, *d.recognition);
            const Timestamp done = now + outcome.total_latency_us;
            queue.push({done, seq++, RecognizeDoneEvent{std::move(*d.recognition), std::move(outcome)}});
        }
    };

    while (!queue.empty() && queue.top().ts < scenario.duration) {
        VirtualEvent ev = queue.top();
        queue.pop();
        const Timestamp now = ev.ts;
        if (auto* grab = std::get_if<GrabEvent>(&ev.body)) {
            handle_dispatch(now,
                            ctrl.on_grab(now, make_frame(scenario, grab->frame_id, now)));
        } else if (auto* tick = std::get_if<TickEvent>(&ev.body)) {
            ctrl.on_tick(now, tick->index);
        } else if (auto* dd = std::get_if<DetectDoneEvent>(&ev.body)) {
            handle_dispatch(now, ctrl.on_detect_done(now, dd->job, std::move(dd->outcome)));
        } else if (auto* rd = std::get_if<RecognizeDoneEvent>(&ev.body)) {
            handle_dispatch(now, ctrl.on_recognize_done(now, rd->job, std::move(rd->outcome)));
        }
    }

    RunResult result;
    result.summary = ctrl.summarize();
    result.trace = std::move(ctrl.trace());
    result.annotated = std::move(ctrl.annotated());
    return result;
}

// ---------------------------------------------------------------------------
// Realtime: one thread per architecture box. Workers receive jobs over
// capacity-one channels, burn their sampled latency with an interruptible
// sleep, and post completions to the controller inbox. The controller
// thread is the only one touching shared pipeline state.

struct GrabMsg {
    Frame frame;
};
struct DetectDoneMsg {
    DetectionJob job;
    DetectionOutcome outcome;
};
struct RecognizeDoneMsg {
    RecognitionJob job;
    RecognitionOutcome outcome;
};
using ControllerMsg = std::variant<GrabMsg, DetectDoneMsg, RecognizeDoneMsg>;

template <typename T>
class Channel {
public:
    void push(T value) {
        {
            std::lock_guard lock(mu_);
            items_.push(std::move(value));
        }
        cv_.notify_one();
    }

    void close() {
        {
            std::lock_guard lock(mu_);
            closed_ = true;
        }
        cv_.notify_all();
    }

    /// Blocks until an item or close; nullopt means closed and drained.
    std::optional<T> pop() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return closed_ || !items_.empty(); });
        if (items_.empty())
            return std::nullopt;
        T v = std::move(items_.front());
        items_.pop();
        return v;
    }

    /// Waits until an item arrives or `deadline` passes. Timed waits here
    /// and in StopFlag go through system_clock: libstdc++ turns
    /// steady-clock waits into pthread_cond_clockwait, which older TSan
    /// runtimes cannot model.
    template <typename Clock, typename Dur>
    std::optional<T> pop_until(const std::chrono::time_point<Clock, Dur>& deadline) {
        std::unique_lock lock(mu_);
        auto sys_deadline = std::chrono::system_clock::now() + (deadline - Clock::now());
        cv_.wait_until(lock, sys_deadline, [&] { return closed_ || !items_.empty(); });
        if (items_.empty())
            return std::nullopt;
        T v = std::move(items_.front());
        items_.pop();
        return v;
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::queue<T> items_;
    bool closed_ = false;
};

class StopFlag {
public:
    void raise() {
        {
            std::lock_guard lock(mu_);
            raised_ = true;
        }
        cv_.notify_all();
    }

    bool raised() {
        std::lock_guard lock(mu_);
        return raised_;
    }

    /// True when woken by stop, false when the full wait elapsed.
    bool sleep_interruptible(std::chrono::microseconds d) {
        std::unique_lock lock(mu_);
        return cv_.wait_until(lock, std::chrono::system_clock::now() + d,
                              [&] { return raised_; });
    }

    template <typename Clock, typename Dur>
    bool sleep_until_interruptible(const std::chrono::time_point<Clock, Dur>& tp) {
        std::unique_lock lock(mu_);
        auto sys_tp = std::chrono::system_clock::now() + (tp - Clock::now());
        return cv_.wait_until(lock, sys_tp, [&] { return raised_; });
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    bool raised_ = false;
};

RunResult run_realtime(const Scenario& scenario, const ResolvedConfig& rc) {
    using SteadyClock = std::chrono::steady_clock;
    const auto t0 = SteadyClock::now();
    auto now_us = [&]() -> Timestamp {
        return std::chrono::duration_cast<std::chrono::microseconds>(SteadyClock::now() - t0)
            .count();
    };

    Controller ctrl(scenario, rc);
    Channel<ControllerMsg> inbox;
    Channel<DetectionJob> detection_jobs;
    Channel<RecognitionJob> recognition_jobs;
    StopFlag stop;

    std::thread grabber([&] {
        for (std::int64_t i = 0;; ++i) {
            const Timestamp ts = detail::schedule_at(i, rc.frame_rate);
            if (ts >= scenario.duration)
                break;
            if (stop.sleep_until_interruptible(t0 + std::chrono::microseconds(ts)))
                break;
            inbox.push(GrabMsg{make_frame(scenario, i, std::min(now_us(), scenario.duration))});
        }
    });

    std::thread detect_worker([&] {
        while (auto job = detection_jobs.pop()) {
            DetectionOutcome outcome = detail::perform_detection(scenario, rc, *job);
            stop.sleep_interruptible(std::chrono::microseconds(outcome.latency_us));
            inbox.push(DetectDoneMsg{*job, std::move(outcome)});
        }
    });

    std::thread recognize_worker([&] {
        while (auto job = recognition_jobs.pop()) {
            RecognitionOutcome outcome = detail::perform_recognition(scenario, rc, *job);
            stop.sleep_interruptible(std::chrono::microseconds(outcome.total_latency_us));
            inbox.push(RecognizeDoneMsg{std::move(*job), std::move(outcome)});
        }
    });

    auto handle_dispatch = [&](Controller::Dispatch d) {
        if (d.detection)
            detection_jobs.push(*d.detection);
        if (d.recognition)
            recognition_jobs.push(std::move(*d.recognition));
    };

    std::int64_t next_tick = 0;
    while (true) {
        const Timestamp now = now_us();
        if (now >= scenario.duration)
            break;
        const Timestamp tick_ts = detail::schedule_at(next_tick, rc.visualization_rate);
        if (tick_ts >= scenario.duration) {
            // No further ticks; idle out the remaining duration.
            if (stop.sleep_until_interruptible(t0 + std::chrono::microseconds(scenario.duration)))
                break;
            continue;
        }
        auto msg = inbox.pop_until(t0 + std::chrono::microseconds(tick_ts));
        if (msg) {
            const Timestamp ts = std::min(now_us(), scenario.duration - 1);
            if (auto* grab = std::get_if<GrabMsg>(&*msg))
                handle_dispatch(ctrl.on_grab(ts, std::move(grab->frame)));
            else if (auto* dd = std::get_if<DetectDoneMsg>(&*msg))
                handle_dispatch(ctrl.on_detect_done(ts, dd->job, std::move(dd->outcome)));
            else if (auto* rd = std::get_if<RecognizeDoneMsg>(&*msg))
                handle_dispatch(ctrl.on_recognize_done(ts, rd->job, std::move(rd->outcome)));
        } else if (now_us() >= tick_ts) {
            ctrl.on_tick(std::min(now_us(), scenario.duration - 1), next_tick);
            ++next_tick;
        }
    }

    stop.raise();
    detection_jobs.close();
    recognition_jobs.close();
    inbox.close();
    grabber.join();
    detect_worker.join();
    recognize_worker.join();

    RunResult result;
    result.summary = ctrl.summarize();
    result.trace = std::move(ctrl.trace());
    result.annotated = std::move(ctrl.annotated());
    return result;
}

} // namespace

RunResult run(const Scenario& scenario, const PipelineConfig& config) {
    scenario.validate();
    const ResolvedConfig rc = detail::resolve(scenario, config);
    if (config.clock_mode == ClockMode::virtual_clock)
        return run_virtual(scenario, rc);
    return run_realtime(scenario, rc);
}

} // namespace facepipe
