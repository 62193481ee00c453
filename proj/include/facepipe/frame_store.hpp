#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "facepipe/types.hpp"

namespace facepipe {

struct EvictedFrame {
    Frame frame;
    /// True when the frame left the buffer without ever being
    /// detection-processed; these count toward drop_count.
    bool dropped_unprocessed = false;
};

/// Bounded store of recent frames, ordered by id. Single-owner: only the
/// controller mutates it; workers interact through checkout/complete.
///
/// Checkout serves the NEWEST eligible frame per stage (freshness first),
/// at most one outstanding checkout per stage. Eviction removes the
/// oldest frame that is not currently checked out, which may be the frame
/// just pushed when everything older is in flight.
class FrameStore {
public:
    explicit FrameStore(std::size_t capacity = 32);

    /// Appends `frame`; frame ids must be strictly increasing (throws
    /// ContractViolation otherwise). Returns the evicted frame when the
    /// buffer was full.
    std::optional<EvictedFrame> push(Frame frame);

    /// Claims the newest eligible frame for `stage` and returns a copy,
    /// or nullopt when nothing is eligible. Eligibility: detection wants
    /// frames not yet detected; recognition wants detected,
    /// not-yet-recognized frames with at least one face.
    /// Throws ContractViolation if `stage` already holds a checkout.
    std::optional<Frame> checkout(Stage stage);

    enum class CompleteResult {
        applied,
        /// The frame is gone from the buffer; the completion is a no-op
        /// the caller should record in its trace.
        evicted_noop,
    };

    /// Finishes the outstanding checkout for (frame_id, stage). For the
    /// detection stage `detections` is stored and detection_done set; for
    /// recognition the frame is marked recognition_done.
    /// Completing an id that has already been evicted returns
    /// evicted_noop; completing a present frame that is not checked out
    /// for `stage` (or an id never pushed) throws ContractViolation.
    CompleteResult complete(std::int64_t frame_id, Stage stage,
                            std::vector<Detection> detections = {});

    /// Newest frame by id regardless of processing state; never blocks.
    std::optional<Frame> latest() const;

    const Frame* find(std::int64_t frame_id) const;
    std::optional<std::int64_t> checked_out(Stage stage) const;

    std::size_t size() const { return frames_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t drop_count() const { return drop_count_; }

private:
    static std::size_t idx(Stage s) { return s == Stage::detection ? 0 : 1; }
    bool eligible(const Frame& f, Stage stage) const;

    std::size_t capacity_;
    std::deque<Frame> frames_; // ascending by id
    std::optional<std::int64_t> in_flight_[2];
    std::uint64_t drop_count_ = 0;
    std::int64_t max_id_seen_ = -1;
};

} // namespace facepipe
