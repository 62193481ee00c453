#include "facepipe/alignment.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include "facepipe/error.hpp"

namespace facepipe {

namespace {

using Cplx = std::complex<double>;

Cplx to_cplx(const Vec2& v) { return {v.x, v.y}; }

} // namespace

Vec2 SimilarityTransform::apply(const Vec2& p) const {
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    return {scale * (c * p.x - s * p.y) + translation.x,
            scale * (s * p.x + c * p.y) + translation.y};
}

SimilarityTransform SimilarityTransform::inverse() const {
    SimilarityTransform inv;
    inv.scale = 1.0 / scale;
    inv.rotation = -rotation;
    const Vec2 t = inv.apply(translation);
    inv.translation = {-t.x, -t.y};
    return inv;
}

SimilarityTransform SimilarityTransform::then(const SimilarityTransform& next) const {
    SimilarityTransform out;
    out.scale = scale * next.scale;
    out.rotation = rotation + next.rotation;
    out.translation = next.apply(translation);
    return out;
}

SimilarityTransform estimate_similarity(std::span<const Vec2> source,
                                        std::span<const Vec2> target) {
    if (source.size() != target.size())
        throw InvalidInput("point set sizes differ");
    const std::size_t n = source.size();
    if (n < 2)
        throw InvalidInput("need at least 2 point pairs");

    Cplx mean_s{0, 0}, mean_t{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        mean_s += to_cplx(source[i]);
        mean_t += to_cplx(target[i]);
    }
    mean_s /= static_cast<double>(n);
    mean_t /= static_cast<double>(n);

    // Minimizing sum |a*s_i + b - t_i|^2 over complex a, b gives
    // a = <t', s'> / <s', s'> on centered points and b from the means.
    Cplx num{0, 0};
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Cplx sc = to_cplx(source[i]) - mean_s;
        const Cplx tc = to_cplx(target[i]) - mean_t;
        num += tc * std::conj(sc);
        den += std::norm(sc);
    }
    if (den <= 1e-12)
        throw DegenerateInput("source points are (near-)coincident");

    const Cplx a = num / den;
    const double scale = std::abs(a);
    if (scale <= 0.0 || !std::isfinite(scale))
        throw DegenerateInput("least-squares scale collapsed to zero");

    SimilarityTransform t;
    t.scale = scale;
    t.rotation = std::arg(a);
    const Cplx trans = mean_t - a * mean_s;
    t.translation = {trans.real(), trans.imag()};
    return t;
}

std::vector<Vec2> apply_transform(const SimilarityTransform& t, std::span<const Vec2> pts) {
    std::vector<Vec2> out;
    out.reserve(pts.size());
    for (const Vec2& p : pts)
        out.push_back(t.apply(p));
    return out;
}

double alignment_residual(std::span<const Vec2> source, std::span<const Vec2> target,
                          const SimilarityTransform& t) {
    if (source.size() != target.size())
        throw InvalidInput("point set sizes differ");
    if (source.empty())
        throw InvalidInput("empty point sets");
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        const Vec2 d = t.apply(source[i]) - target[i];
        sum_sq += d.x * d.x + d.y * d.y;
    }
    return std::sqrt(sum_sq / static_cast<double>(source.size()));
}

FaceTemplate FaceTemplate::canonical68() {
    FaceTemplate t;
    t.points.reserve(68);
    auto push = [&](double x, double y) { t.points.push_back({x, y}); };

    // Jaw line, 17 points on a U-shaped arc.
    for (int i = 0; i < 17; ++i) {
        const double u = static_cast<double>(i) / 16.0;
        const double th = M_PI * u;
        push(0.5 - 0.42 * std::cos(th), 0.42 + 0.52 * std::sin(th));
    }
    // Brows, 5 points each with a slight arch.
    for (int i = 0; i < 5; ++i) {
        const double u = static_cast<double>(i) / 4.0;
        push(0.16 + 0.24 * u, 0.30 - 0.05 * std::sin(M_PI * u));
    }
    for (int i = 0; i < 5; ++i) {
        const double u = static_cast<double>(i) / 4.0;
        push(0.60 + 0.24 * u, 0.30 - 0.05 * std::sin(M_PI * u));
    }
    // Nose bridge (4) and base (5).
    for (int i = 0; i < 4; ++i)
        push(0.5, 0.36 + 0.06 * i);
    for (int i = 0; i < 5; ++i) {
        const double u = static_cast<double>(i) / 4.0;
        push(0.40 + 0.20 * u, 0.62 - 0.025 * std::abs(u - 0.5) * 2.0 + 0.025);
    }
    // Eyes, 6 points each on small ellipses.
    for (int i = 0; i < 6; ++i) {
        const double th = 2.0 * M_PI * i / 6.0;
        push(0.30 + 0.075 * std::cos(th), 0.40 + 0.03 * std::sin(th));
    }
    for (int i = 0; i < 6; ++i) {
        const double th = 2.0 * M_PI * i / 6.0;
        push(0.70 + 0.075 * std::cos(th), 0.40 + 0.03 * std::sin(th));
    }
    // Outer lip (12) and inner lip (8).
    for (int i = 0; i < 12; ++i) {
        const double th = 2.0 * M_PI * i / 12.0;
        push(0.50 + 0.14 * std::cos(th), 0.78 + 0.055 * std::sin(th));
    }
    for (int i = 0; i < 8; ++i) {
        const double th = 2.0 * M_PI * i / 8.0;
        push(0.50 + 0.085 * std::cos(th), 0.78 + 0.025 * std::sin(th));
    }
    return t;
}

FaceTemplate FaceTemplate::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open template file: " + path);
    FaceTemplate t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        double x, y;
        if (!(ss >> x >> y))
            throw ParseError("template " + path + ": bad point on line " + std::to_string(lineno));
        t.points.push_back({x, y});
    }
    if (!t.valid())
        throw ParseError("template " + path + ": needs >= 2 distinct points");
    return t;
}

void FaceTemplate::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write template file: " + path);
    out.precision(17);
    for (const Vec2& p : points)
        out << p.x << " " << p.y << "\n";
    if (!out)
        throw IoError("failed writing template file: " + path);
}

Vec2 FaceTemplate::centroid() const {
    Vec2 c{};
    for (const Vec2& p : points)
        c = c + p;
    const double n = static_cast<double>(points.size());
    return {c.x / n, c.y / n};
}

bool FaceTemplate::valid() const {
    if (points.size() < 2)
        return false;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].x != points[0].x || points[i].y != points[0].y)
            return true;
    return false;
}

} // namespace facepipe
