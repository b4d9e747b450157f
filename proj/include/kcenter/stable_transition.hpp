#pragma once

#include <cstdint>
#include <queue>
#include <unordered_map>
#include <vector>

#include "kcenter/kinetic_trace.hpp"
#include "kcenter/morph.hpp"

namespace kcenter {

// One defining set can continuously deform into another by gaining or losing
// a single point (a swap), or by sliding between square placements of the
// same index set.
inline bool defining_sets_adjacent(const DefiningSet& a, const DefiningSet& b) {
    if (a.indices == b.indices) return a.tag != b.tag;
    size_t i = 0, j = 0;
    int diff = 0;
    while (i < a.indices.size() && j < b.indices.size()) {
        if (a.indices[i] == b.indices[j]) {
            ++i;
            ++j;
        } else if (a.indices[i] < b.indices[j]) {
            ++diff;
            ++i;
        } else {
            ++diff;
            ++j;
        }
    }
    diff += static_cast<int>((a.indices.size() - i) + (b.indices.size() - j));
    return diff == 1;
}

namespace detail {

inline uint64_t pack_tuple(std::span<const int> sorted_ids) {
    uint64_t key = 1;  // leading 1 guards against length aliasing
    for (int id : sorted_ids) key = (key << 10) | static_cast<uint64_t>(id);
    return key;
}

// Bit matrix of defining_sets_adjacent over a candidate list.
class CandAdjacency {
public:
    explicit CandAdjacency(std::span<const DefiningSet> defs) : n_(defs.size()) {
        words_ = (n_ + 63) / 64;
        bits_.assign(n_ * words_, 0);
        for (size_t a = 0; a < n_; ++a)
            for (size_t b = a + 1; b < n_; ++b)
                if (defining_sets_adjacent(defs[a], defs[b])) {
                    bits_[a * words_ + b / 64] |= (1ull << (b % 64));
                    bits_[b * words_ + a / 64] |= (1ull << (a % 64));
                }
    }
    bool operator()(int a, int b) const {
        return bits_[static_cast<size_t>(a) * words_ + b / 64] >> (b % 64) & 1;
    }

private:
    size_t n_, words_;
    std::vector<uint64_t> bits_;
};

}  // namespace detail

// Vertices are k-multisets of candidate defining sets, weighted with the
// criterion value of the induced candidate k-center (infinite when invalid).
// Two vertices are connected when they differ in exactly one defining set and
// the change is a single swap or slide, or when the shared k-1 shapes cover
// every point so the remaining shape may shrink away and relocate freely.
struct SwapGraph {
    Metric metric = Metric::euclidean;
    Criterion criterion = Criterion::minmax;
    int k = 1;
    std::vector<Point> points;
    std::vector<DefiningSet> candidates;
    std::vector<Shape> shapes;    // per candidate
    std::vector<uint32_t> masks;  // per candidate coverage
    std::vector<std::vector<int>> vertices;  // sorted candidate-id multisets
    std::vector<double> cost;

    int find_vertex(std::vector<DefiningSet> defs) const {
        std::sort(defs.begin(), defs.end());
        for (size_t v = 0; v < vertices.size(); ++v) {
            bool same = vertices[v].size() == defs.size();
            for (size_t s = 0; same && s < defs.size(); ++s)
                same = candidates[vertices[v][s]] == defs[s];
            if (same) return static_cast<int>(v);
        }
        return -1;
    }

    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        const auto& tup = vertices[v];
        const uint32_t full = (1u << points.size()) - 1;
        for (size_t s = 0; s < tup.size(); ++s) {
            if (s > 0 && tup[s] == tup[s - 1]) continue;
            std::vector<int> rest;
            uint32_t shared = 0;
            for (size_t r = 0; r < tup.size(); ++r)
                if (r != s) {
                    rest.push_back(tup[r]);
                    shared |= masks[tup[r]];
                }
            const bool reloc = shared == full;
            auto it = buckets_.find(detail::pack_tuple(rest));
            if (it == buckets_.end()) continue;
            for (auto [other_id, w] : it->second) {
                if (w == v) continue;
                if (reloc || (*adjacency_)(tup[s], other_id)) out.push_back(w);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // populated by build_swap_graph
    std::unordered_map<uint64_t, std::vector<std::pair<int, int>>> buckets_;
    std::shared_ptr<detail::CandAdjacency> adjacency_;
};

inline SwapGraph build_swap_graph(std::span<const Point> points, int k, Metric metric,
                                  Criterion criterion, double tol = kDefaultTol,
                                  const Limits& limits = {10, 3}) {
    detail::check_limits(points.size(), k, limits, "build_swap_graph");
    SwapGraph g;
    g.metric = metric;
    g.criterion = criterion;
    g.k = k;
    g.points.assign(points.begin(), points.end());
    for (auto& [def, shape] : enumerate_candidates(points, metric)) {
        g.masks.push_back(detail::coverage_mask(shape, points, tol));
        g.candidates.push_back(std::move(def));
        g.shapes.push_back(shape);
    }
    const size_t c = g.candidates.size();
    double projected = 1.0;
    for (int i = 0; i < k; ++i) projected *= static_cast<double>(c + i) / (i + 1);
    if (projected > 5e6)
        throw limit_error("build_swap_graph: ~" + std::to_string(static_cast<long long>(projected)) +
                          " vertices; reduce n or k");
    g.adjacency_ = std::make_shared<detail::CandAdjacency>(g.candidates);

    const uint32_t full = (1u << points.size()) - 1;
    std::vector<int> tup;
    auto rec = [&](auto&& self, int start, uint32_t mask, double acc) -> void {
        if (static_cast<int>(tup.size()) == k) {
            const int v = static_cast<int>(g.vertices.size());
            g.vertices.push_back(tup);
            g.cost.push_back(mask == full ? acc : std::numeric_limits<double>::infinity());
            for (size_t s = 0; s < tup.size(); ++s) {
                if (s > 0 && tup[s] == tup[s - 1]) continue;
                std::vector<int> rest;
                for (size_t r = 0; r < tup.size(); ++r)
                    if (r != s) rest.push_back(tup[r]);
                g.buckets_[detail::pack_tuple(rest)].emplace_back(tup[s], v);
            }
            return;
        }
        for (int i = start; i < static_cast<int>(c); ++i) {
            tup.push_back(i);
            const double r = g.shapes[i].radius;
            self(self, i, mask | g.masks[i],
                 criterion == Criterion::minmax ? std::max(acc, r) : acc + r);
            tup.pop_back();
        }
    };
    rec(rec, 0, 0, 0.0);
    return g;
}

struct TransitionResult {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<int> path;  // vertex indices, src first
};

// Cheapest stable transition between two valid vertices: the path minimizing
// the maximum vertex cost en route (shape radii peak on vertices, not along
// the continuous deformation between adjacent ones).
inline TransitionResult transition_cost(const SwapGraph& g, int src, int dst) {
    if (src < 0 || dst < 0 || src >= static_cast<int>(g.vertices.size()) ||
        dst >= static_cast<int>(g.vertices.size()))
        throw std::invalid_argument("transition_cost: vertex index out of range");
    if (!std::isfinite(g.cost[src]) || !std::isfinite(g.cost[dst]))
        throw std::invalid_argument("transition_cost: endpoint vertex is invalid");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.vertices.size(), inf);
    std::vector<int> pred(g.vertices.size(), -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[src] = std::max(g.cost[src], g.cost[dst]);
    heap.push({dist[src], src});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        if (v == dst) break;
        for (int w : g.neighbors(v)) {
            if (!std::isfinite(g.cost[w])) continue;
            const double nd = std::max(d, g.cost[w]);
            if (nd < dist[w]) {
                dist[w] = nd;
                pred[w] = v;
                heap.push({nd, w});
            }
        }
    }
    TransitionResult res;
    res.cost = dist[dst];
    if (std::isfinite(dist[dst])) {
        for (int v = dst; v != -1; v = pred[v]) res.path.push_back(v);
        std::reverse(res.path.begin(), res.path.end());
    }
    return res;
}

}  // namespace kcenter
