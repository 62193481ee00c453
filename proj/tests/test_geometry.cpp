#include <doctest.h>

#include "facepipe/error.hpp"
#include "facepipe/geometry.hpp"
#include "facepipe/rng.hpp"
#include "facepipe/types.hpp"

using namespace facepipe;

namespace {

// Independent IoU oracle: rasterize both boxes on a fine grid and count
// cell centers.
double iou_rasterized(const BBox& a, const BBox& b, int cells = 1000) {
    const double lo_x = std::min(a.x, b.x) - 1.0;
    const double hi_x = std::max(a.right(), b.right()) + 1.0;
    const double lo_y = std::min(a.y, b.y) - 1.0;
    const double hi_y = std::max(a.bottom(), b.bottom()) + 1.0;
    const double dx = (hi_x - lo_x) / cells;
    const double dy = (hi_y - lo_y) / cells;
    auto inside = [](const BBox& box, double x, double y) {
        return x >= box.x && x < box.right() && y >= box.y && y < box.bottom();
    };
    long inter = 0, uni = 0;
    for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < cells; ++j) {
            const double x = lo_x + (i + 0.5) * dx;
            const double y = lo_y + (j + 0.5) * dy;
            const bool in_a = inside(a, x, y);
            const bool in_b = inside(b, x, y);
            if (in_a && in_b)
                ++inter;
            if (in_a || in_b)
                ++uni;
        }
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace

TEST_CASE("iou of identical boxes is 1") {
    const BBox b{0, 0, 2, 2};
    CHECK(iou(b, b) == doctest::Approx(1.0));
}

TEST_CASE("iou of disjoint boxes is 0") {
    CHECK(iou(BBox{0, 0, 1, 1}, BBox{5, 5, 1, 1}) == 0.0);
}

TEST_CASE("iou of offset overlap matches the rasterization oracle") {
    const BBox a{0, 0, 2, 2};
    const BBox b{1, 1, 2, 2};
    CHECK(iou(a, b) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(iou(a, b) == doctest::Approx(iou_rasterized(a, b)).epsilon(5e-3));
}

TEST_CASE("iou rejects degenerate boxes") {
    CHECK_THROWS_AS(iou(BBox{0, 0, 0, 2}, BBox{0, 0, 1, 1}), InvalidInput);
    CHECK_THROWS_AS(iou(BBox{0, 0, 1, 1}, BBox{0, 0, 1, -1}), InvalidInput);
}

TEST_CASE("iou is symmetric, bounded, and 1 on itself for random boxes") {
    Rng rng(2024);
    for (int i = 0; i < 500; ++i) {
        const BBox a{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(0.5, 60),
                     rng.uniform(0.5, 60)};
        const BBox b{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(0.5, 60),
                     rng.uniform(0.5, 60)};
        const double ab = iou(a, b);
        CHECK(ab == iou(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(iou(a, a) == doctest::Approx(1.0));
    }
}

TEST_CASE("centroid") {
    const Vec2 c1 = centroid(BBox{0, 0, 2, 2});
    CHECK(c1.x == 1.0);
    CHECK(c1.y == 1.0);
    const Vec2 c2 = centroid(BBox{10, 20, 4, 6});
    CHECK(c2.x == 12.0);
    CHECK(c2.y == 23.0);
    const Vec2 c3 = centroid(BBox{0, 0, 240, 180});
    CHECK(c3.x == 120.0);
    CHECK(c3.y == 90.0);
    CHECK_THROWS_AS(centroid(BBox{0, 0, 0, 1}), InvalidInput);
}

TEST_CASE("clamp_to_frame keeps boxes inside") {
    const BBox b = clamp_to_frame(BBox{-5, 170, 20, 20}, 240, 180);
    CHECK(b.x == 0.0);
    CHECK(b.y == 160.0);
    CHECK(b.w == 20.0);
    CHECK(b.h == 20.0);
}

TEST_CASE("expression distribution stays normalized") {
    auto d = ExpressionDist::normalized({2, 1, 1, 0, 0, 0, 0});
    CHECK(d.is_normalized());
    CHECK(d.p[0] == doctest::Approx(0.5));
    CHECK(d.argmax() == Expression::neutral);

    auto u = ExpressionDist::uniform();
    CHECK(u.is_normalized());
    CHECK(u.argmax() == Expression::neutral); // tie resolves to lowest index

    auto h = ExpressionDist::one_hot_smoothed(Expression::anger);
    CHECK(h.is_normalized());
    CHECK(h.argmax() == Expression::anger);
    CHECK(h.p[0] == doctest::Approx(0.1 / 6.0));

    CHECK_THROWS_AS(ExpressionDist::normalized({0, 0, 0, 0, 0, 0, 0}), InvalidInput);
    CHECK_THROWS_AS(ExpressionDist::normalized({1, -1, 0, 0, 0, 0, 0}), InvalidInput);
}

TEST_CASE("expression and gender names round-trip") {
    for (int i = 0; i < kExpressionCount; ++i) {
        const auto e = static_cast<Expression>(i);
        CHECK(expression_from_string(to_string(e)) == e);
    }
    CHECK(gender_from_string("female") == Gender::female);
    CHECK(gender_from_string("male") == Gender::male);
    CHECK(!gender_from_string("other").has_value());
    CHECK(gender_label(0.5) == Gender::female);
    CHECK(gender_label(0.49) == Gender::male);
}
