#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kcenter/geometry.hpp"

namespace kcenter {

struct Limits {
    int max_n = 12;
    int max_k = 4;
};

// A candidate k-center: k defining sets, their shapes, and the disk sets
// (point indices assigned to each shape; together they partition the input).
struct CandidateCover {
    std::vector<DefiningSet> defining_sets;
    std::vector<Shape> shapes;
    std::vector<std::vector<int>> disk_sets;
};

inline double cover_cost(std::span<const Shape> shapes, Criterion criterion) {
    double cost = 0.0;
    for (const Shape& s : shapes)
        cost = criterion == Criterion::minmax ? std::max(cost, s.radius) : cost + s.radius;
    return cost;
}

// All shapes definable by 1-3 points: singletons, pairs, and triples. In the
// Euclidean metric collinear triples are dropped (their disk is a pair disk);
// in the rectilinear metric pairs and triples carry all three placement tags.
inline std::vector<std::pair<DefiningSet, Shape>> enumerate_candidates(
    std::span<const Point> points, Metric metric) {
    const int n = static_cast<int>(points.size());
    std::vector<std::pair<DefiningSet, Shape>> out;
    auto emit = [&](std::vector<int> idx) {
        if (metric == Metric::euclidean) {
            if (idx.size() == 3) {
                const Point a = points[idx[0]], b = points[idx[1]], c = points[idx[2]];
                const double span = detail::coord_span(a, b, c);
                if (span <= 0.0 || std::abs(cross(b - a, c - a)) < 1e-12 * span * span)
                    return;  // degenerate triple
            }
            DefiningSet def{std::move(idx), ExtremeTag::centered};
            Shape s = shape_of(def, points, metric);
            out.emplace_back(std::move(def), s);
            return;
        }
        for (ExtremeTag tag : {ExtremeTag::centered, ExtremeTag::low, ExtremeTag::high}) {
            DefiningSet def{idx, tag};
            Shape s = shape_of(def, points, metric);
            out.emplace_back(std::move(def), s);
            if (idx.size() == 1) break;  // tags coincide for a point square
        }
    };
    for (int i = 0; i < n; ++i) emit({i});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) emit({i, j});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int l = j + 1; l < n; ++l) emit({i, j, l});
    return out;
}

namespace detail {

inline uint32_t coverage_mask(const Shape& s, std::span<const Point> points, double tol) {
    uint32_t mask = 0;
    for (size_t p = 0; p < points.size(); ++p)
        if (covers(s, points[p], tol)) mask |= (1u << p);
    return mask;
}

struct RankedCandidate {
    DefiningSet def;
    Shape shape;
    uint32_t mask = 0;
};

// Candidates sorted by radius with coverage masks, the working set for every
// exact search in this header.
inline std::vector<RankedCandidate> ranked_candidates(std::span<const Point> points,
                                                      Metric metric, double tol) {
    std::vector<RankedCandidate> cands;
    for (auto& [def, shape] : enumerate_candidates(points, metric))
        cands.push_back({std::move(def), shape, coverage_mask(shape, points, tol)});
    std::stable_sort(cands.begin(), cands.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) {
                         return a.shape.radius < b.shape.radius;
                     });
    return cands;
}

// Enumerates k-combinations of candidates that cover everything, invoking
// visit(chosen, cost) for each one at most `bound + tol` expensive. With
// first_only the search tightens the bound as it goes and keeps the best
// (ties resolved toward the lexicographically smallest defining-set key).
template <typename Visit>
void search_covers(const std::vector<RankedCandidate>& cands, uint32_t full, int k,
                   Criterion criterion, double tol, double& bound, bool first_only,
                   Visit&& visit) {
    const int m = static_cast<int>(cands.size());
    std::vector<uint32_t> suffix_or(m + 1, 0);
    for (int i = m - 1; i >= 0; --i) suffix_or[i] = suffix_or[i + 1] | cands[i].mask;

    std::vector<int> chosen;
    chosen.reserve(k);
    auto rec = [&](auto&& self, int start, uint32_t mask, double cost) -> void {
        if (static_cast<int>(chosen.size()) == k) {
            if (mask == full && cost <= bound + tol) {
                visit(chosen, cost);
                if (first_only) bound = std::min(bound, cost);
            }
            return;
        }
        const int slots = k - static_cast<int>(chosen.size());
        for (int i = start; i <= m - slots; ++i) {
            if ((mask | suffix_or[i]) != full) break;  // no later candidate can finish
            const double r = cands[i].shape.radius;
            const double next_cost =
                criterion == Criterion::minmax ? std::max(cost, r) : cost + r;
            if (next_cost > bound + tol) break;  // radii sorted ascending
            chosen.push_back(i);
            self(self, i + 1, mask | cands[i].mask, next_cost);
            chosen.pop_back();
        }
    };
    rec(rec, 0, 0, 0.0);
}

inline std::vector<std::vector<int>> assign_disk_sets(std::span<const Shape> shapes,
                                                      std::span<const Point> points, double tol) {
    std::vector<std::vector<int>> sets(shapes.size());
    for (size_t p = 0; p < points.size(); ++p)
        for (size_t s = 0; s < shapes.size(); ++s)
            if (covers(shapes[s], points[p], tol)) {
                sets[s].push_back(static_cast<int>(p));
                break;
            }
    return sets;
}

inline std::vector<DefiningSet> cover_key(const std::vector<RankedCandidate>& cands,
                                          const std::vector<int>& chosen) {
    std::vector<DefiningSet> key;
    key.reserve(chosen.size());
    for (int c : chosen) key.push_back(cands[c].def);
    std::sort(key.begin(), key.end());
    return key;
}

inline void check_limits(size_t n, int k, const Limits& limits, const char* where) {
    if (static_cast<int>(n) > limits.max_n)
        throw limit_error(std::string(where) + ": n=" + std::to_string(n) + " exceeds max_n=" +
                          std::to_string(limits.max_n) + " (raise --max-n to override)");
    if (k > limits.max_k)
        throw limit_error(std::string(where) + ": k=" + std::to_string(k) + " exceeds max_k=" +
                          std::to_string(limits.max_k) + " (raise --max-k to override)");
}

}  // namespace detail

struct SolveResult {
    CandidateCover cover;
    double cost = 0.0;
};

// Exact static k-center over candidate covers: the minimum of the criterion
// over all valid k-tuples of candidate shapes.
inline SolveResult solve_static(std::span<const Point> points, int k, Metric metric,
                                Criterion criterion, double tol = kDefaultTol,
                                const Limits& limits = {}) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    if (k < 1 || k > static_cast<int>(points.size()))
        throw std::invalid_argument("k must satisfy 1 <= k <= n");
    detail::check_limits(points.size(), k, limits, "solve_static");

    const auto cands = detail::ranked_candidates(points, metric, tol);
    const uint32_t full = points.size() == 32 ? ~0u : (1u << points.size()) - 1;

    double bound = std::numeric_limits<double>::infinity();
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<int> best;
    std::vector<DefiningSet> best_key;
    detail::search_covers(cands, full, k, criterion, tol, bound, /*first_only=*/true,
                          [&](const std::vector<int>& chosen, double cost) {
                              auto key = detail::cover_key(cands, chosen);
                              if (cost < best_cost - tol ||
                                  (cost <= best_cost + tol && (best.empty() || key < best_key))) {
                                  best = chosen;
                                  best_key = std::move(key);
                                  best_cost = std::min(best_cost, cost);
                              }
                          });

    SolveResult res;
    res.cost = best_cost;
    for (int c : best) {
        res.cover.defining_sets.push_back(cands[c].def);
        res.cover.shapes.push_back(cands[c].shape);
    }
    res.cover.disk_sets = detail::assign_disk_sets(res.cover.shapes, points, tol);
    return res;
}

// Every valid candidate cover within tol of the optimum, deduplicated by the
// multiset of shapes and ordered by defining-set key.
inline std::vector<CandidateCover> all_optimal_covers(std::span<const Point> points, int k,
                                                      Metric metric, Criterion criterion,
                                                      double tol = kDefaultTol,
                                                      const Limits& limits = {}) {
    const double opt = solve_static(points, k, metric, criterion, tol, limits).cost;
    const auto cands = detail::ranked_candidates(points, metric, tol);
    const uint32_t full = points.size() == 32 ? ~0u : (1u << points.size()) - 1;

    struct Entry {
        std::vector<DefiningSet> key;
        std::vector<int> chosen;
    };
    std::vector<Entry> entries;
    double bound = opt;
    detail::search_covers(cands, full, k, criterion, tol, bound, /*first_only=*/false,
                          [&](const std::vector<int>& chosen, double) {
                              entries.push_back({detail::cover_key(cands, chosen), chosen});
                          });
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.key < b.key; });

    auto shape_multiset = [&](const std::vector<int>& chosen) {
        std::vector<Shape> shapes;
        for (int c : chosen) shapes.push_back(cands[c].shape);
        std::sort(shapes.begin(), shapes.end(), [](const Shape& a, const Shape& b) {
            if (a.center.x != b.center.x) return a.center.x < b.center.x;
            if (a.center.y != b.center.y) return a.center.y < b.center.y;
            return a.radius < b.radius;
        });
        return shapes;
    };
    auto same_shapes = [&](const std::vector<Shape>& a, const std::vector<Shape>& b) {
        for (size_t i = 0; i < a.size(); ++i)
            if (std::abs(a[i].center.x - b[i].center.x) > tol ||
                std::abs(a[i].center.y - b[i].center.y) > tol ||
                std::abs(a[i].radius - b[i].radius) > tol)
                return false;
        return true;
    };

    std::vector<CandidateCover> out;
    std::vector<std::vector<Shape>> seen;
    for (const Entry& e : entries) {
        auto shapes = shape_multiset(e.chosen);
        bool dup = false;
        for (const auto& s : seen)
            if (same_shapes(s, shapes)) {
                dup = true;
                break;
            }
        if (dup) continue;
        seen.push_back(std::move(shapes));
        CandidateCover cover;
        for (int c : e.chosen) {
            cover.defining_sets.push_back(cands[c].def);
            cover.shapes.push_back(cands[c].shape);
        }
        cover.disk_sets = detail::assign_disk_sets(cover.shapes, points, tol);
        out.push_back(std::move(cover));
    }
    return out;
}

}  // namespace kcenter
