#include "facepipe/geometry.hpp"

#include <algorithm>

#include "facepipe/error.hpp"

namespace facepipe {

namespace {

void require_valid(const BBox& b, const char* which) {
    if (!b.valid())
        throw InvalidInput(std::string("degenerate box (") + which + "): w and h must be > 0");
}

} // namespace

double iou(const BBox& a, const BBox& b) {
    require_valid(a, "a");
    require_valid(b, "b");
    const double ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    if (ix <= 0.0 || iy <= 0.0)
        return 0.0;
    const double inter = ix * iy;
    return inter / (a.area() + b.area() - inter);
}

Vec2 centroid(const BBox& b) {
    require_valid(b, "b");
    return {b.x + b.w / 2.0, b.y + b.h / 2.0};
}

BBox clamp_to_frame(const BBox& b, double frame_w, double frame_h) {
    BBox r = b;
    r.w = std::min(r.w, frame_w);
    r.h = std::min(r.h, frame_h);
    r.x = std::clamp(r.x, 0.0, frame_w - r.w);
    r.y = std::clamp(r.y, 0.0, frame_h - r.h);
    return r;
}

} // namespace facepipe
