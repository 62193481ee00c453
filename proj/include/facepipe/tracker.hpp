#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <utility>
#include <vector>

#include "facepipe/aggregation.hpp"
#include "facepipe/types.hpp"

namespace facepipe {

struct TrackerConfig {
    /// Match gate as a fraction of the frame diagonal.
    double max_match_distance = 0.10;
    /// A track is removed once missed_count exceeds this.
    int expiry_misses = 10;

    bool valid() const { return max_match_distance > 0.0 && expiry_misses >= 1; }
};

struct FaceTrack {
    std::int64_t track_id = 0;
    BBox last_box;
    std::deque<std::pair<Timestamp, Vec2>> centroid_history; // bounded
    std::int64_t last_seen_frame = -1;
    int missed_count = 0;
    AttributeWindows estimates;
    int recognition_cycle = 0;
};

struct MatchedPair {
    std::int64_t track_id;
    std::size_t detection_index;
};

struct Assignment {
    /// Accepted pairs in greedy order (ascending centroid distance).
    std::vector<MatchedPair> matched;
    /// Tracks spawned for unmatched detections, in detection-index order.
    std::vector<MatchedPair> spawned;
    /// Tracks that saw no detection this frame, ascending by id.
    std::vector<std::int64_t> missed;
};

/// Nearest-centroid association of detections to persistent face tracks.
/// Greedy: candidate pairs are sorted by distance (ties by track id, then
/// detection index) and accepted while both sides are free and the
/// distance is inside the gate.
class TrackRegistry {
public:
    TrackRegistry(TrackerConfig cfg, double frame_w, double frame_h,
                  std::size_t window_capacity = 8);

    /// Associates one frame's detections. frame_id must be newer than the
    /// last processed frame (throws ContractViolation otherwise).
    Assignment match_detections(const std::vector<Detection>& detections,
                                std::int64_t frame_id, Timestamp ts);

    /// Removes every track with missed_count > expiry_misses; returns the
    /// removed ids, ascending.
    std::vector<std::int64_t> prune(Timestamp ts);

    const std::map<std::int64_t, FaceTrack>& tracks() const { return tracks_; }
    FaceTrack* find(std::int64_t track_id);
    std::int64_t created_count() const { return created_; }
    double match_gate_px() const;

private:
    static constexpr std::size_t kCentroidHistoryCap = 64;

    TrackerConfig cfg_;
    double frame_diag_;
    std::size_t window_capacity_;
    std::map<std::int64_t, FaceTrack> tracks_;
    std::int64_t next_id_ = 1;
    std::int64_t created_ = 0;
    std::int64_t last_frame_ = -1;
};

} // namespace facepipe
