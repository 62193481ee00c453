#pragma once

#include <cmath>

namespace facepipe {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Axis-aligned box, top-left anchored, continuous pixel coordinates.
struct BBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    bool valid() const { return w > 0.0 && h > 0.0; }
    double area() const { return w * h; }
    double right() const { return x + w; }
    double bottom() const { return y + h; }
};

struct Detection {
    BBox box;
    double confidence = 0.0; // in [0,1]
};

/// Intersection-over-union of two boxes, exact area arithmetic.
/// Throws InvalidInput when either box is degenerate (w<=0 or h<=0).
double iou(const BBox& a, const BBox& b);

/// Box center. Throws InvalidInput on a degenerate box.
Vec2 centroid(const BBox& b);

/// Shift (and if necessary shrink) a box so it lies inside [0,w]x[0,h].
BBox clamp_to_frame(const BBox& b, double frame_w, double frame_h);

} // namespace facepipe
