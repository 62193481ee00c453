#include "facepipe/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "facepipe/error.hpp"

namespace facepipe {

TrackRegistry::TrackRegistry(TrackerConfig cfg, double frame_w, double frame_h,
                             std::size_t window_capacity)
    : cfg_(cfg), frame_diag_(std::hypot(frame_w, frame_h)), window_capacity_(window_capacity) {
    if (!cfg_.valid())
        throw InvalidInput("tracker config: gate must be > 0 and expiry >= 1");
    if (frame_w <= 0.0 || frame_h <= 0.0)
        throw InvalidInput("tracker frame size must be positive");
}

double TrackRegistry::match_gate_px() const {
    return cfg_.max_match_distance * frame_diag_;
}

Assignment TrackRegistry::match_detections(const std::vector<Detection>& detections,
                                           std::int64_t frame_id, Timestamp ts) {
    if (frame_id <= last_frame_)
        throw ContractViolation("match_detections: frame " + std::to_string(frame_id) +
                                " not newer than " + std::to_string(last_frame_));
    last_frame_ = frame_id;

    struct Candidate {
        double dist;
        std::int64_t track_id;
        std::size_t det_index;
    };
    const double gate = match_gate_px();
    std::vector<Candidate> candidates;
    for (const auto& [id, track] : tracks_) {
        const Vec2 tc = centroid(track.last_box);
        for (std::size_t j = 0; j < detections.size(); ++j) {
            const double d = distance(tc, centroid(detections[j].box));
            if (d <= gate)
                candidates.push_back({d, id, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist)
            return a.dist < b.dist;
        if (a.track_id != b.track_id)
            return a.track_id < b.track_id;
        return a.det_index < b.det_index;
    });

    Assignment out;
    std::set<std::int64_t> used_tracks;
    std::set<std::size_t> used_dets;
    for (const Candidate& c : candidates) {
        if (used_tracks.count(c.track_id) || used_dets.count(c.det_index))
            continue;
        used_tracks.insert(c.track_id);
        used_dets.insert(c.det_index);
        out.matched.push_back({c.track_id, c.det_index});
    }

    for (const MatchedPair& m : out.matched) {
        FaceTrack& t = tracks_.at(m.track_id);
        t.last_box = detections[m.detection_index].box;
        t.centroid_history.emplace_back(ts, centroid(t.last_box));
        if (t.centroid_history.size() > kCentroidHistoryCap)
            t.centroid_history.pop_front();
        t.last_seen_frame = frame_id;
        t.missed_count = 0;
    }
    for (auto& [id, track] : tracks_) {
        if (!used_tracks.count(id)) {
            ++track.missed_count;
            out.missed.push_back(id);
        }
    }
    for (std::size_t j = 0; j < detections.size(); ++j) {
        if (used_dets.count(j))
            continue;
        FaceTrack t{.track_id = next_id_++,
                    .last_box = detections[j].box,
                    .centroid_history = {},
                    .last_seen_frame = frame_id,
                    .missed_count = 0,
                    .estimates = AttributeWindows(window_capacity_),
                    .recognition_cycle = 0};
        t.centroid_history.emplace_back(ts, centroid(t.last_box));
        out.spawned.push_back({t.track_id, j});
        tracks_.emplace(t.track_id, std::move(t));
        ++created_;
    }
    return out;
}

std::vector<std::int64_t> TrackRegistry::prune(Timestamp) {
    std::vector<std::int64_t> removed;
    for (auto it = tracks_.begin(); it != tracks_.end();) {
        if (it->second.missed_count > cfg_.expiry_misses) {
            removed.push_back(it->first);
            it = tracks_.erase(it);
        } else {
            ++it;
        }
    }
    return removed;
}

FaceTrack* TrackRegistry::find(std::int64_t track_id) {
    auto it = tracks_.find(track_id);
    return it == tracks_.end() ? nullptr : &it->second;
}

} // namespace facepipe
