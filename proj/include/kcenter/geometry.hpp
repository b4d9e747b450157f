#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "kcenter/errors.hpp"

namespace kcenter {

inline constexpr double kDefaultTol = 1e-9;

// Covering-shape family: disks under L2, axis-aligned squares under Linf.
enum class Metric { euclidean, rectilinear };

// Placement of a covering square along its slack axis. A smallest enclosing
// square is tight on one axis only; on the other the center may slide. "low"
// pushes the square toward smaller coordinates (the topmost/rightmost defining
// point ends up on the boundary), "high" the other way. Disks ignore the tag.
enum class ExtremeTag { centered, low, high };

enum class Criterion { minmax, minsum };

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double sq_dist(Point a, Point b) { return dot(a - b, a - b); }
inline double euclidean_dist(Point a, Point b) { return norm(a - b); }
inline double chebyshev_dist(Point a, Point b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

inline double distance(Metric metric, Point a, Point b) {
    return metric == Metric::euclidean ? euclidean_dist(a, b) : chebyshev_dist(a, b);
}

// A covering shape: a disk (L2 radius) or an axis-aligned square (Linf
// "radius" = half the side length).
struct Shape {
    Metric metric = Metric::euclidean;
    Point center;
    double radius = 0.0;
};

inline bool covers(const Shape& s, Point p, double tol = kDefaultTol) {
    return distance(s.metric, s.center, p) <= s.radius + tol;
}

inline bool cover_valid(std::span<const Shape> shapes, std::span<const Point> points,
                        double tol = kDefaultTol) {
    for (const Point& p : points) {
        bool hit = false;
        for (const Shape& s : shapes) {
            if (covers(s, p, tol)) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

inline bool shapes_intersect(const Shape& a, const Shape& b, double tol = kDefaultTol) {
    return distance(a.metric, a.center, b.center) <= a.radius + b.radius + tol;
}

// Smallest same-metric shape containing both input shapes entirely.
inline Shape enclosing_shape(const Shape& a, const Shape& b) {
    if (a.metric == Metric::euclidean) {
        const double d = euclidean_dist(a.center, b.center);
        if (d + b.radius <= a.radius) return a;
        if (d + a.radius <= b.radius) return b;
        const double r = 0.5 * (d + a.radius + b.radius);
        // Center sits on the segment, offset so both boundaries are touched.
        const double t = (r - a.radius) / d;
        return {Metric::euclidean, a.center + t * (b.center - a.center), r};
    }
    const double lo_x = std::min(a.center.x - a.radius, b.center.x - b.radius);
    const double hi_x = std::max(a.center.x + a.radius, b.center.x + b.radius);
    const double lo_y = std::min(a.center.y - a.radius, b.center.y - b.radius);
    const double hi_y = std::max(a.center.y + a.radius, b.center.y + b.radius);
    const double r = 0.5 * std::max(hi_x - lo_x, hi_y - lo_y);
    return {Metric::rectilinear, {0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y)}, r};
}

// One to three point indices that define a covering shape, plus the square
// placement tag for the rectilinear metric.
struct DefiningSet {
    std::vector<int> indices;  // sorted, distinct
    ExtremeTag tag = ExtremeTag::centered;
};

inline bool operator==(const DefiningSet& a, const DefiningSet& b) {
    return a.indices == b.indices && a.tag == b.tag;
}

inline bool operator<(const DefiningSet& a, const DefiningSet& b) {
    if (a.indices != b.indices) return a.indices < b.indices;
    return static_cast<int>(a.tag) < static_cast<int>(b.tag);
}

namespace detail {

inline double coord_span(Point a, Point b, Point c) {
    const double lo_x = std::min({a.x, b.x, c.x}), hi_x = std::max({a.x, b.x, c.x});
    const double lo_y = std::min({a.y, b.y, c.y}), hi_y = std::max({a.y, b.y, c.y});
    return std::max(hi_x - lo_x, hi_y - lo_y);
}

inline Shape diametral_disk(Point a, Point b) {
    return {Metric::euclidean, {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)},
            0.5 * euclidean_dist(a, b)};
}

}  // namespace detail

// Disk through three non-collinear points. Collinearity is decided by the
// triangle area against 1e-12 * span^2; callers fall back to pair disks.
inline std::optional<Shape> try_circumdisk(Point p, Point q, Point r) {
    const double span = detail::coord_span(p, q, r);
    const double area2 = cross(q - p, r - p);  // twice the signed area
    if (span <= 0.0 || std::abs(area2) < 1e-12 * span * span) return std::nullopt;
    const double p2 = dot(p, p), q2 = dot(q, q), r2 = dot(r, r);
    const double cx = (p2 * (q.y - r.y) + q2 * (r.y - p.y) + r2 * (p.y - q.y)) / (2.0 * area2);
    const double cy = (p2 * (r.x - q.x) + q2 * (p.x - r.x) + r2 * (q.x - p.x)) / (2.0 * area2);
    const Point c{cx, cy};
    const double rad = (euclidean_dist(c, p) + euclidean_dist(c, q) + euclidean_dist(c, r)) / 3.0;
    return Shape{Metric::euclidean, c, rad};
}

inline Shape circumdisk(Point p, Point q, Point r) {
    auto d = try_circumdisk(p, q, r);
    if (!d) throw degeneracy_error("collinear triple has no circumdisk");
    return *d;
}

namespace detail {

// Smallest disk for 1..3 boundary points.
inline Shape disk_of_support(std::span<const Point> s) {
    switch (s.size()) {
        case 1:
            return {Metric::euclidean, s[0], 0.0};
        case 2:
            return diametral_disk(s[0], s[1]);
        default: {
            // Prefer a pair disk when the third point already fits.
            const double slack = 1e-12 * (1.0 + coord_span(s[0], s[1], s[2]));
            for (int skip = 0; skip < 3; ++skip) {
                const Shape d = diametral_disk(s[(skip + 1) % 3], s[(skip + 2) % 3]);
                if (covers(d, s[skip], slack)) return d;
            }
            if (auto d = try_circumdisk(s[0], s[1], s[2])) return *d;
            // Numerically collinear: widest pair wins.
            Shape best = diametral_disk(s[0], s[1]);
            for (int skip = 0; skip < 2; ++skip) {
                const Shape d = diametral_disk(s[skip], s[2]);
                if (d.radius > best.radius) best = d;
            }
            return best;
        }
    }
}

inline Shape welzl(std::span<const Point> pts, size_t limit, std::vector<Point>& support) {
    if (limit == 0 || support.size() == 3) {
        if (support.empty()) return {Metric::euclidean, {0.0, 0.0}, -1.0};
        return disk_of_support(support);
    }
    const Point p = pts[limit - 1];
    Shape d = welzl(pts, limit - 1, support);
    const double slack = 1e-12 * (1.0 + std::abs(d.radius));
    if (d.radius >= 0.0 && covers(d, p, slack)) return d;
    support.push_back(p);
    d = welzl(pts, limit - 1, support);
    support.pop_back();
    return d;
}

}  // namespace detail

// Smallest L2 disk covering all points (Welzl's move-to-back recursion).
inline Shape min_enclosing_disk(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    if (points.size() == 1) return {Metric::euclidean, points[0], 0.0};
    std::vector<Point> support;
    return detail::welzl(points, points.size(), support);
}

// Smallest axis-aligned square covering all points; radius is exactly
// max(extent_x, extent_y) / 2. The tag picks the placement on the slack axis.
inline Shape min_enclosing_square(std::span<const Point> points,
                                  ExtremeTag tag = ExtremeTag::centered) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    double lo_x = points[0].x, hi_x = points[0].x;
    double lo_y = points[0].y, hi_y = points[0].y;
    for (const Point& p : points) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double w = hi_x - lo_x, h = hi_y - lo_y;
    const double r = 0.5 * std::max(w, h);
    Point c{0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y)};
    if (w > h) {  // slack on y
        if (tag == ExtremeTag::low) c.y = hi_y - r;
        if (tag == ExtremeTag::high) c.y = lo_y + r;
    } else if (h > w) {  // slack on x
        if (tag == ExtremeTag::low) c.x = hi_x - r;
        if (tag == ExtremeTag::high) c.x = lo_x + r;
    }
    return {Metric::rectilinear, c, r};
}

inline Shape min_enclosing_shape(Metric metric, std::span<const Point> points,
                                 ExtremeTag tag = ExtremeTag::centered) {
    return metric == Metric::euclidean ? min_enclosing_disk(points)
                                       : min_enclosing_square(points, tag);
}

// Shape determined by a defining set against a full position list.
inline Shape shape_of(const DefiningSet& def, std::span<const Point> positions, Metric metric) {
    std::vector<Point> pts;
    pts.reserve(def.indices.size());
    for (int i : def.indices) pts.push_back(positions[static_cast<size_t>(i)]);
    return min_enclosing_shape(metric, pts, def.tag);
}

}  // namespace kcenter
