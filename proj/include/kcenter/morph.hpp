#pragma once

#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "kcenter/static_solver.hpp"

namespace kcenter {

enum class NodeColor { red, blue };

// 2-colored intersection graph of two equally sized shape sets covering the
// same points: an edge joins every intersecting red/blue pair.
struct IntersectionGraph {
    std::vector<Shape> red;
    std::vector<Shape> blue;
    std::vector<std::pair<int, int>> edges;  // (red index, blue index)

    int degree(NodeColor color, int v) const {
        int d = 0;
        for (auto [r, b] : edges)
            if ((color == NodeColor::red ? r : b) == v) ++d;
        return d;
    }
    bool has_edge(int r, int b) const {
        for (auto e : edges)
            if (e.first == r && e.second == b) return true;
        return false;
    }
    // Forest check: a simple bipartite graph is a forest iff no subset closes
    // a cycle, i.e. union-find never merges two already-joined components.
    bool is_forest() const {
        std::vector<int> parent(red.size() + blue.size());
        for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
        auto find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (auto [r, b] : edges) {
            const int a = find(r), c = find(static_cast<int>(red.size()) + b);
            if (a == c) return false;
            parent[a] = c;
        }
        return true;
    }
};

inline IntersectionGraph build_intersection_graph(std::span<const Shape> red,
                                                  std::span<const Shape> blue,
                                                  double tol = kDefaultTol) {
    if (red.size() != blue.size())
        throw std::invalid_argument("intersection graph needs equally many red and blue shapes");
    IntersectionGraph g;
    g.red.assign(red.begin(), red.end());
    g.blue.assign(blue.begin(), blue.end());
    for (int r = 0; r < static_cast<int>(red.size()); ++r)
        for (int b = 0; b < static_cast<int>(blue.size()); ++b)
            if (shapes_intersect(red[r], blue[b], tol)) g.edges.emplace_back(r, b);
    return g;
}

// A vertex of the requested color with degree at most one. Its existence is
// guaranteed for forests; if none exists the graph contains a cycle.
inline int peel_low_degree(const IntersectionGraph& g, NodeColor color) {
    const int n = static_cast<int>(color == NodeColor::red ? g.red.size() : g.blue.size());
    for (int v = 0; v < n; ++v)
        if (g.degree(color, v) <= 1) return v;
    throw std::invalid_argument("no low-degree vertex: graph is not a forest");
}

struct Keyframe {
    double time = 0.0;
    Point center;
    double radius = 0.0;
};

// Piecewise-linear center path and radius profile of one shape.
struct ShapeTrack {
    Metric metric = Metric::euclidean;
    std::vector<Keyframe> keys;

    Shape at(double t) const {
        if (keys.empty()) return {metric, {0, 0}, 0.0};
        if (t <= keys.front().time) return {metric, keys.front().center, keys.front().radius};
        if (t >= keys.back().time) return {metric, keys.back().center, keys.back().radius};
        for (size_t i = 0; i + 1 < keys.size(); ++i) {
            if (t > keys[i + 1].time) continue;
            const Keyframe &a = keys[i], &b = keys[i + 1];
            const double span = b.time - a.time;
            const double u = span > 0.0 ? (t - a.time) / span : 1.0;
            return {metric, a.center + u * (b.center - a.center),
                    a.radius + u * (b.radius - a.radius)};
        }
        return {metric, keys.back().center, keys.back().radius};
    }
};

// Continuous transformation of a shape set over normalized time [0,1].
struct MorphSchedule {
    std::vector<ShapeTrack> tracks;
    double initial_cost = 0.0;
    double growth_factor = 1.0;  // max over time of criterion cost / initial cost

    std::vector<Shape> shapes_at(double t) const {
        std::vector<Shape> out;
        out.reserve(tracks.size());
        for (const auto& tr : tracks) out.push_back(tr.at(t));
        return out;
    }
};

struct ValidationResult {
    bool covered = false;
    double max_cost = 0.0;
};

// Samples the schedule at `samples` uniform times, checking point coverage
// and taking the worst criterion value seen.
inline ValidationResult validate_schedule(const MorphSchedule& s, std::span<const Point> points,
                                          Criterion criterion, int samples = 1024,
                                          double tol = kDefaultTol) {
    if (samples < 2) throw std::invalid_argument("validate_schedule needs samples >= 2");
    ValidationResult res{true, 0.0};
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const auto shapes = s.shapes_at(t);
        if (!cover_valid(shapes, points, tol)) res.covered = false;
        res.max_cost = std::max(res.max_cost, cover_cost(shapes, criterion));
    }
    return res;
}

namespace detail {

inline ShapeTrack static_track(const Shape& s) {
    return {s.metric, {{0.0, s.center, s.radius}, {1.0, s.center, s.radius}}};
}

inline void insert_move(ShapeTrack& tr, double t0, double t1, const Shape& from,
                        const Shape& to) {
    tr.keys.pop_back();  // replace the trailing hold
    tr.keys.push_back({t0, from.center, from.radius});
    tr.keys.push_back({t1, to.center, to.radius});
    tr.keys.push_back({1.0, to.center, to.radius});
}

}  // namespace detail

// Zero-growth morph of R onto B for equal-radius shape sets whose intersection
// graph is a forest: repeatedly peel a red vertex of degree <= 1 and translate
// it onto its blue neighbour (or any unconsumed blue when isolated).
inline MorphSchedule forest_morph(std::span<const Shape> red, std::span<const Shape> blue,
                                  std::span<const Point> points, double tol = kDefaultTol) {
    IntersectionGraph g = build_intersection_graph(red, blue, tol);
    if (!g.is_forest()) throw std::invalid_argument("forest_morph: intersection graph has a cycle");
    double radius = red.empty() ? 0.0 : red[0].radius;
    for (const Shape& s : g.red)
        if (std::abs(s.radius - radius) > tol)
            throw std::invalid_argument("forest_morph requires equal radii");
    for (const Shape& s : g.blue)
        if (std::abs(s.radius - radius) > tol)
            throw std::invalid_argument("forest_morph requires equal radii");

    const int k = static_cast<int>(red.size());
    MorphSchedule sched;
    for (const Shape& s : red) sched.tracks.push_back(detail::static_track(s));
    sched.initial_cost = cover_cost(red, Criterion::minmax);
    sched.growth_factor = 1.0;

    std::vector<bool> red_done(k, false), blue_done(k, false);
    auto remaining_degree = [&](NodeColor color, int v) {
        int d = 0;
        for (auto [r, b] : g.edges)
            if (!red_done[r] && !blue_done[b] && (color == NodeColor::red ? r : b) == v) ++d;
        return d;
    };
    for (int step = 0; step < k; ++step) {
        int r_pick = -1;
        for (int r = 0; r < k && r_pick < 0; ++r)
            if (!red_done[r] && remaining_degree(NodeColor::red, r) <= 1) r_pick = r;
        if (r_pick < 0)
            throw std::invalid_argument("forest_morph: peeling failed, graph is not a forest");
        int b_pick = -1;
        for (auto [r, b] : g.edges)
            if (r == r_pick && !blue_done[b]) {
                b_pick = b;
                break;
            }
        if (b_pick < 0)
            for (int b = 0; b < k; ++b)
                if (!blue_done[b]) {
                    b_pick = b;
                    break;
                }
        const double t0 = static_cast<double>(step) / k;
        const double t1 = static_cast<double>(step + 1) / k;
        detail::insert_move(sched.tracks[r_pick], t0, t1, g.red[r_pick], g.blue[b_pick]);
        red_done[r_pick] = true;
        blue_done[b_pick] = true;
    }
    return sched;
}

// Growth factor sufficient to break a 2k-cycle in the intersection graph of
// two optimal minmax solutions.
inline double cycle_bound(int k) {
    const double c = std::cos(std::numbers::pi / (2.0 * k));
    return 0.5 * (1.0 + std::sqrt(1.0 + 8.0 * c * c));
}

struct FourCycleBreak {
    int grown_red = -1;
    double new_radius = 0.0;
    double factor = 1.0;
    MorphSchedule prefix;  // the single growth step
};

// Breaks a 4-cycle r1-b1-r2-b2 by growing one red shape over three of the four
// intersection regions, chosen so the growth stays within sqrt(2) of the
// common radius. Points of P standing in the regions act as the region
// witnesses; the grown shape keeps covering its own sole charges throughout.
inline FourCycleBreak break_four_cycle(std::span<const Shape> red, std::span<const Shape> blue,
                                       std::span<const Point> points, double tol = kDefaultTol) {
    IntersectionGraph g = build_intersection_graph(red, blue, tol);
    const int k = static_cast<int>(red.size());
    double radius = red.empty() ? 0.0 : red[0].radius;
    for (const Shape& s : g.red)
        if (std::abs(s.radius - radius) > tol)
            throw std::invalid_argument("break_four_cycle requires equal radii");
    for (const Shape& s : g.blue)
        if (std::abs(s.radius - radius) > tol)
            throw std::invalid_argument("break_four_cycle requires equal radii");

    int r1 = -1, r2 = -1, b1 = -1, b2 = -1;
    for (int i = 0; i < k && r1 < 0; ++i)
        for (int j = i + 1; j < k && r1 < 0; ++j)
            for (int a = 0; a < k && r1 < 0; ++a)
                for (int c = a + 1; c < k && r1 < 0; ++c)
                    if (g.has_edge(i, a) && g.has_edge(i, c) && g.has_edge(j, a) &&
                        g.has_edge(j, c) &&
                        (g.degree(NodeColor::red, i) == 2 || g.degree(NodeColor::red, j) == 2)) {
                        r1 = i;
                        r2 = j;
                        b1 = a;
                        b2 = c;
                    }
    if (r1 < 0)
        throw std::invalid_argument(
            "break_four_cycle: no 4-cycle with a red degree-2 vertex present");

    // Intersection regions in cyclic order r1-b1-r2-b2, witnessed by points.
    auto region_points = [&](const Shape& s1, const Shape& s2) {
        std::vector<Point> out;
        for (const Point& p : points)
            if (covers(s1, p, tol) && covers(s2, p, tol)) out.push_back(p);
        return out;
    };
    const std::vector<Point> reg[4] = {
        region_points(g.red[r1], g.blue[b1]), region_points(g.blue[b1], g.red[r2]),
        region_points(g.red[r2], g.blue[b2]), region_points(g.blue[b2], g.red[r1])};

    auto farthest = [&](const std::vector<Point>& a, const std::vector<Point>& c) {
        std::pair<Point, Point> best{{0, 0}, {0, 0}};
        double d = -1.0;
        for (const Point& p : a)
            for (const Point& q : c)
                if (double e = euclidean_dist(p, q); e > d) {
                    d = e;
                    best = {p, q};
                }
        return std::pair{d, best};
    };
    auto [d_ac, pair_ac] = farthest(reg[0], reg[2]);
    auto [d_bd, pair_bd] = farthest(reg[1], reg[3]);

    // Far pair = the cross pair with the smaller span; the grown shape covers
    // it plus the witness of one in-between region. Regions 0 and 3 lie on r1,
    // regions 1 and 2 on r2.
    struct Option {
        std::vector<Point> pts;
        int red;
    };
    std::vector<Option> options;
    auto add_option = [&](const std::pair<Point, Point>& far, const std::vector<Point>& mid,
                          int grown) {
        Option o;
        o.pts = {far.first, far.second};
        o.pts.insert(o.pts.end(), mid.begin(), mid.end());
        o.red = grown;
        options.push_back(std::move(o));
    };
    const bool ac_shorter = d_ac >= 0.0 && (d_bd < 0.0 || d_ac <= d_bd);
    if (ac_shorter) {
        add_option(pair_ac, reg[1], r2);  // regions a,b,c -> two on r2
        add_option(pair_ac, reg[3], r1);  // regions a,d,c -> two on r1
    } else if (d_bd >= 0.0) {
        add_option(pair_bd, reg[0], r1);
        add_option(pair_bd, reg[2], r2);
    }

    FourCycleBreak out;
    double best_r = std::numeric_limits<double>::infinity();
    for (const Option& o : options) {
        std::vector<Point> need = o.pts;
        for (const Point& p : points) {  // sole charges of the growing red
            if (!covers(g.red[o.red], p, tol)) continue;
            bool other = false;
            for (int r = 0; r < k; ++r)
                if (r != o.red && covers(g.red[r], p, tol)) other = true;
            if (!other) need.push_back(p);
        }
        if (need.empty()) continue;
        const Shape grown = min_enclosing_shape(red[0].metric, need);
        if (grown.radius < best_r) {
            best_r = grown.radius;
            out.grown_red = o.red;
            out.new_radius = std::max(grown.radius, radius);
            out.factor = radius > 0.0 ? std::max(1.0, grown.radius / radius) : 1.0;
            out.prefix.tracks.clear();
            for (const Shape& s : red) out.prefix.tracks.push_back(detail::static_track(s));
            const Shape target = grown.radius > radius ? grown : red[o.red];
            detail::insert_move(out.prefix.tracks[o.red], 0.0, 1.0, red[o.red], target);
        }
    }
    if (out.grown_red < 0) {  // all regions empty of points: nothing to do
        out.grown_red = r1;
        out.new_radius = radius;
        out.factor = 1.0;
        for (const Shape& s : red) out.prefix.tracks.push_back(detail::static_track(s));
    }
    out.prefix.initial_cost = cover_cost(red, Criterion::minmax);
    out.prefix.growth_factor = out.factor;
    return out;
}

// Three-phase morph of R onto B through a maximal red-blue matching: matched
// intersecting reds grow over their partner, unmatched reds fly to theirs,
// then everything shrinks into place. Keeps the criterion within twice the
// worse of the two covers.
inline MorphSchedule matching_morph(std::span<const Shape> red, std::span<const Shape> blue,
                                    std::span<const Point> points, Criterion criterion,
                                    double tol = kDefaultTol) {
    IntersectionGraph g = build_intersection_graph(red, blue, tol);
    const int k = static_cast<int>(red.size());
    std::vector<int> match(k, -1);
    std::vector<bool> blue_used(k, false);
    for (auto [r, b] : g.edges)
        if (match[r] < 0 && !blue_used[b]) {
            match[r] = b;
            blue_used[b] = true;
        }
    std::vector<int> flying;  // reds matched to non-intersecting blues
    for (int r = 0; r < k; ++r)
        if (match[r] < 0) flying.push_back(r);
    int next_blue = 0;
    for (int r : flying) {
        while (blue_used[next_blue]) ++next_blue;
        match[r] = next_blue;
        blue_used[next_blue] = true;
    }

    MorphSchedule sched;
    for (const Shape& s : red) sched.tracks.push_back(detail::static_track(s));
    sched.initial_cost = cover_cost(red, criterion);

    std::vector<Shape> grown(k);
    std::vector<bool> is_flying(k, false);
    for (int r : flying) is_flying[r] = true;
    for (int r = 0; r < k; ++r)
        grown[r] = is_flying[r] ? g.red[r] : enclosing_shape(g.red[r], g.blue[match[r]]);

    const int steps = (k - static_cast<int>(flying.size())) + static_cast<int>(flying.size()) + k;
    int step = 0;
    auto slice = [&](int s) {
        return std::pair{static_cast<double>(s) / steps, static_cast<double>(s + 1) / steps};
    };
    for (int r = 0; r < k; ++r) {  // phase 1: grow matched intersecting reds
        if (is_flying[r]) continue;
        auto [t0, t1] = slice(step++);
        detail::insert_move(sched.tracks[r], t0, t1, g.red[r], grown[r]);
    }
    for (int r : flying) {  // phase 2: relocate the rest
        auto [t0, t1] = slice(step++);
        detail::insert_move(sched.tracks[r], t0, t1, g.red[r], g.blue[match[r]]);
        grown[r] = g.blue[match[r]];
    }
    for (int r = 0; r < k; ++r) {  // phase 3: shrink onto the blues
        auto [t0, t1] = slice(step++);
        detail::insert_move(sched.tracks[r], t0, t1, grown[r], g.blue[match[r]]);
    }

    const auto check = validate_schedule(sched, points, criterion, 1024, tol);
    sched.growth_factor = sched.initial_cost > 0.0 ? check.max_cost / sched.initial_cost : 1.0;
    return sched;
}

}  // namespace kcenter
