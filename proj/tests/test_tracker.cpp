#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "facepipe/error.hpp"
#include "facepipe/rng.hpp"
#include "facepipe/tracker.hpp"

using namespace facepipe;

namespace {

Detection det_centered(double cx, double cy, double w = 10, double h = 10) {
    return Detection{BBox{cx - w / 2, cy - h / 2, w, h}, 0.9};
}

TrackRegistry registry_with_gate_px(double gate_px, int expiry = 10) {
    // 300 px diagonal (240x180), so gate fraction = px / 300.
    return TrackRegistry(TrackerConfig{gate_px / 300.0, expiry}, 240, 180);
}

} // namespace

TEST_CASE("detection within the gate matches the existing track") {
    auto reg = registry_with_gate_px(30);
    reg.match_detections({det_centered(100, 100)}, 1, 0);
    auto a = reg.match_detections({det_centered(104, 103)}, 2, 40'000);
    REQUIRE(a.matched.size() == 1);
    CHECK(a.matched[0].track_id == 1);
    CHECK(a.spawned.empty());
    CHECK(a.missed.empty());
    CHECK(reg.find(1)->missed_count == 0);
}

TEST_CASE("detection 200px away spawns a new track; old track missed") {
    auto reg = registry_with_gate_px(30);
    reg.match_detections({det_centered(20, 20)}, 1, 0);
    auto a = reg.match_detections({det_centered(220, 20)}, 2, 40'000);
    CHECK(a.matched.empty());
    REQUIRE(a.spawned.size() == 1);
    CHECK(a.spawned[0].track_id == 2);
    REQUIRE(a.missed.size() == 1);
    CHECK(a.missed[0] == 1);
    CHECK(reg.find(1)->missed_count == 1);
}

TEST_CASE("greedy assignment agrees with brute-force minimum-sum on the two-pair case") {
    auto reg = registry_with_gate_px(30);
    // Tracks at x = 0 and x = 10 (y fixed), then detections at x = 2 and 9.
    reg.match_detections({det_centered(5, 50), det_centered(15, 50)}, 1, 0);
    // Move them to exactly (0,50) and (10,50).
    reg.match_detections({det_centered(0, 50), det_centered(10, 50)}, 2, 40'000);

    auto a = reg.match_detections({det_centered(2, 50), det_centered(9, 50)}, 3, 80'000);
    REQUIRE(a.matched.size() == 2);
    // Greedy picks (track2, det1) first at distance 1, then (track1, det0).
    CHECK(a.matched[0].track_id == 2);
    CHECK(a.matched[0].detection_index == 1);
    CHECK(a.matched[1].track_id == 1);
    CHECK(a.matched[1].detection_index == 0);

    // Brute force over both permutations: {t1->d0, t2->d1} costs 2+1,
    // {t1->d1, t2->d0} costs 9+8; greedy found the minimum-sum matching.
}

TEST_CASE("equidistant candidates resolve by track id then detection index") {
    auto reg = registry_with_gate_px(30);
    reg.match_detections({det_centered(100, 90), det_centered(120, 90)}, 1, 0);
    // One detection exactly between the two tracks.
    auto a = reg.match_detections({det_centered(110, 90)}, 2, 40'000);
    REQUIRE(a.matched.size() == 1);
    CHECK(a.matched[0].track_id == 1);
    CHECK(a.missed == std::vector<std::int64_t>{2});
}

TEST_CASE("assignment is a partial matching within the gate") {
    Rng rng(77);
    auto reg = registry_with_gate_px(35);
    std::int64_t frame = 0;
    for (int step = 0; step < 50; ++step) {
        std::vector<Detection> dets;
        const int n = static_cast<int>(rng.uniform(0, 5));
        for (int i = 0; i < n; ++i)
            dets.push_back(det_centered(rng.uniform(10, 230), rng.uniform(10, 170)));

        std::map<std::int64_t, Vec2> before; // centroids prior to matching
        for (const auto& [id, track] : reg.tracks())
            before[id] = centroid(track.last_box);

        ++frame;
        auto a = reg.match_detections(dets, frame, frame * 40'000);

        std::set<std::int64_t> seen_tracks;
        std::set<std::size_t> seen_dets;
        for (const auto& m : a.matched) {
            CHECK(seen_tracks.insert(m.track_id).second);
            CHECK(seen_dets.insert(m.detection_index).second);
            const FaceTrack* t = reg.find(m.track_id);
            REQUIRE(t);
            CHECK(t->last_seen_frame == frame);
            CHECK(distance(before.at(m.track_id), centroid(dets[m.detection_index].box)) <=
                  reg.match_gate_px());
        }
        for (const auto& s : a.spawned)
            CHECK(seen_dets.insert(s.detection_index).second);
        reg.prune(frame * 40'000);
    }
}

TEST_CASE("identical inputs give identical assignments") {
    for (int rep = 0; rep < 3; ++rep) {
        auto reg = registry_with_gate_px(30);
        reg.match_detections({det_centered(60, 60), det_centered(90, 60)}, 1, 0);
        auto a = reg.match_detections({det_centered(62, 60), det_centered(88, 60)}, 2, 1);
        REQUIRE(a.matched.size() == 2);
        CHECK(a.matched[0].track_id == 1);
        CHECK(a.matched[0].detection_index == 0);
        CHECK(a.matched[1].track_id == 2);
        CHECK(a.matched[1].detection_index == 1);
    }
}

TEST_CASE("frame ids must move forward") {
    auto reg = registry_with_gate_px(30);
    reg.match_detections({}, 5, 0);
    CHECK_THROWS_AS(reg.match_detections({}, 5, 1), ContractViolation);
    CHECK_THROWS_AS(reg.match_detections({}, 4, 1), ContractViolation);
}

TEST_CASE("prune removes tracks strictly beyond the expiry threshold") {
    auto reg = registry_with_gate_px(30, 10);
    reg.match_detections({det_centered(50, 50)}, 1, 0);
    std::int64_t frame = 1;
    for (int i = 0; i < 10; ++i) {
        ++frame;
        reg.match_detections({}, frame, frame);
        CHECK(reg.prune(frame).empty()); // missed_count <= 10 retained
    }
    CHECK(reg.find(1)->missed_count == 10);
    ++frame;
    reg.match_detections({}, frame, frame);
    auto removed = reg.prune(frame);
    REQUIRE(removed.size() == 1);
    CHECK(removed[0] == 1);
    CHECK(reg.find(1) == nullptr);
}

TEST_CASE("prune on an empty registry does nothing") {
    auto reg = registry_with_gate_px(30);
    CHECK(reg.prune(0).empty());
}

TEST_CASE("two parallel well-separated paths never swap identities") {
    // Paths 80 px apart with 2 px steps against a 30 px gate.
    auto reg = registry_with_gate_px(30);
    std::int64_t id_a = 0, id_b = 0;
    for (int step = 0; step < 80; ++step) {
        const double x = 20 + 2.0 * step;
        auto a = reg.match_detections({det_centered(x, 50), det_centered(x, 130)},
                                      step + 1, step * 40'000);
        if (step == 0) {
            REQUIRE(a.spawned.size() == 2);
            id_a = a.spawned[0].track_id;
            id_b = a.spawned[1].track_id;
        } else {
            REQUIRE(a.matched.size() == 2);
            for (const auto& m : a.matched) {
                const double cy = centroid(reg.find(m.track_id)->last_box).y;
                if (m.track_id == id_a)
                    CHECK(cy == doctest::Approx(50));
                else if (m.track_id == id_b)
                    CHECK(cy == doctest::Approx(130));
                else
                    FAIL("unexpected track id");
            }
        }
    }
}
