#pragma once

#include <span>
#include <string>
#include <vector>

#include "facepipe/geometry.hpp"

namespace facepipe {

/// 2-D similarity: p -> scale * R(rotation) * p + translation.
/// Scale is strictly positive; reflections are not representable.
struct SimilarityTransform {
    double scale = 1.0;
    double rotation = 0.0; // radians
    Vec2 translation{};

    Vec2 apply(const Vec2& p) const;
    SimilarityTransform inverse() const;
    /// Composition: first this, then `next`.
    SimilarityTransform then(const SimilarityTransform& next) const;
};

/// Canonical landmark layout in the unit square. The default 68-point
/// template is a stylized procedural layout (jaw, brows, eyes, nose,
/// lips), not taken from any published annotation scheme.
struct FaceTemplate {
    std::vector<Vec2> points;

    static FaceTemplate canonical68();
    /// Plain text, one "x y" pair per line.
    static FaceTemplate load(const std::string& path);
    void save(const std::string& path) const;

    Vec2 centroid() const;
    bool valid() const;
};

/// Least-squares similarity mapping source onto target, closed form via
/// complex linear regression on centered points. Exact when target truly
/// is a similarity image of source.
/// Throws InvalidInput on size mismatch or fewer than 2 points, and
/// DegenerateInput when the source points coincide (or the best scale
/// collapses to zero).
SimilarityTransform estimate_similarity(std::span<const Vec2> source,
                                        std::span<const Vec2> target);

std::vector<Vec2> apply_transform(const SimilarityTransform& t, std::span<const Vec2> pts);

/// Root-mean-square distance between t(source) and target.
double alignment_residual(std::span<const Vec2> source, std::span<const Vec2> target,
                          const SimilarityTransform& t);

} // namespace facepipe
