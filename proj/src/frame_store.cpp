#include "facepipe/frame_store.hpp"

#include <algorithm>
#include <string>

#include "facepipe/error.hpp"

namespace facepipe {

FrameStore::FrameStore(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0)
        throw InvalidInput("frame store capacity must be >= 1");
}

std::optional<EvictedFrame> FrameStore::push(Frame frame) {
    if (frame.id <= max_id_seen_)
        throw ContractViolation("frame id " + std::to_string(frame.id) +
                                " not greater than newest stored id " +
                                std::to_string(max_id_seen_));
    max_id_seen_ = frame.id;
    frames_.push_back(std::move(frame));
    if (frames_.size() <= capacity_)
        return std::nullopt;

    // Oldest frame not claimed by a worker. With one claim per stage at
    // least one candidate always exists, possibly the frame just pushed.
    auto victim = std::find_if(frames_.begin(), frames_.end(),
                               [](const Frame& f) { return !f.meta.in_flight.has_value(); });
    EvictedFrame out;
    out.frame = std::move(*victim);
    out.dropped_unprocessed = !out.frame.meta.detection_done;
    if (out.dropped_unprocessed)
        ++drop_count_;
    frames_.erase(victim);
    return out;
}

bool FrameStore::eligible(const Frame& f, Stage stage) const {
    if (f.meta.in_flight.has_value())
        return false;
    if (stage == Stage::detection)
        return !f.meta.detection_done;
    return f.meta.detection_done && !f.meta.recognition_done && !f.meta.detections.empty();
}

std::optional<Frame> FrameStore::checkout(Stage stage) {
    if (in_flight_[idx(stage)])
        throw ContractViolation(std::string("double checkout for stage ") + to_string(stage));
    // Newest eligible; frames_ is ascending by id.
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
        if (eligible(*it, stage)) {
            Frame copy = *it;
            it->meta.in_flight = stage;
            in_flight_[idx(stage)] = it->id;
            return copy;
        }
    }
    return std::nullopt;
}

FrameStore::CompleteResult FrameStore::complete(std::int64_t frame_id, Stage stage,
                                                std::vector<Detection> detections) {
    auto it = std::find_if(frames_.begin(), frames_.end(),
                           [&](const Frame& f) { return f.id == frame_id; });
    if (it == frames_.end()) {
        if (frame_id >= 0 && frame_id <= max_id_seen_) {
            // Evicted while (or before) the result arrived.
            if (in_flight_[idx(stage)] == frame_id)
                in_flight_[idx(stage)].reset();
            return CompleteResult::evicted_noop;
        }
        throw ContractViolation("complete: frame " + std::to_string(frame_id) + " never pushed");
    }
    if (in_flight_[idx(stage)] != frame_id)
        throw ContractViolation("complete: frame " + std::to_string(frame_id) +
                                " not checked out for " + to_string(stage));
    if (stage == Stage::detection) {
        it->meta.detections = std::move(detections);
        it->meta.detection_done = true;
    } else {
        it->meta.recognition_done = true;
    }
    it->meta.in_flight.reset();
    in_flight_[idx(stage)].reset();
    return CompleteResult::applied;
}

std::optional<Frame> FrameStore::latest() const {
    if (frames_.empty())
        return std::nullopt;
    return frames_.back();
}

const Frame* FrameStore::find(std::int64_t frame_id) const {
    for (const Frame& f : frames_)
        if (f.id == frame_id)
            return &f;
    return nullptr;
}

std::optional<std::int64_t> FrameStore::checked_out(Stage stage) const {
    return in_flight_[idx(stage)];
}

} // namespace facepipe
