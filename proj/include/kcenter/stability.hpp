#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <unordered_map>
#include <vector>

#include "kcenter/stable_transition.hpp"

namespace kcenter {

struct SweepConfig {
    double eps = 1e-9;      // time/event tolerance and the U(t) ratio floor
    int samples = 2048;     // uniform fill of the time grid
    int event_grid = 2048;  // scan resolution for event detection
    double ratio_cap = 2.5;  // initial vertex-enumeration ceiling, doubled on demand
    Limits limits{12, 3};
    size_t node_budget = 200000000;  // enumeration guard across one sweep pass
};

struct SwapStep {
    std::vector<DefiningSet> defining_sets;
    double cost = 0.0;
};

// One instantaneous sequence of swaps performed at a sample time.
struct TransitionRecord {
    double t = 0.0;
    double bottleneck_cost = 0.0;
    double bottleneck_ratio = 1.0;
    std::vector<SwapStep> chain;  // occupied vertices, departure first
};

struct TimelinePoint {
    double t = 0.0;
    double unstable = 0.0;
    double stable = 0.0;
};

struct StabilityReport {
    std::vector<TimelinePoint> timeline;
    std::vector<double> events;
    double ratio = 1.0;
    double argmax_time = 0.0;
    double eps_floor = 1e-9;  // absolute slack used where U(t) <= eps
    std::vector<TransitionRecord> transitions;
    std::vector<ShapeTrack> witness;  // real-time parameterized stable trajectory
};

// Maximum center displacement over elapsed time across a piecewise-linear
// witness; infinite when any displacement happens in zero time.
inline double measure_max_speed(std::span<const ShapeTrack> witness) {
    double best = 0.0;
    for (const ShapeTrack& tr : witness)
        for (size_t i = 0; i + 1 < tr.keys.size(); ++i) {
            const double d = euclidean_dist(tr.keys[i].center, tr.keys[i + 1].center);
            const double dt = tr.keys[i + 1].time - tr.keys[i].time;
            if (d > 1e-12 && dt <= 1e-15) return std::numeric_limits<double>::infinity();
            if (dt > 0.0) best = std::max(best, d / dt);
        }
    return best;
}

namespace detail {

// Time-swept feasibility structure. A stable trajectory occupies one swap
// graph vertex per sample, may keep its vertex across samples when the vertex
// stays affordable, and may run any instantaneous swap chain inside a sample.
// The minimum over trajectories of the worst cost/U ratio is computed by a
// bottleneck shortest path over the time-expanded graph.
class StableSweep {
public:
    StableSweep(const MovingPointSet& m, int k, Metric metric, Criterion criterion,
                const SweepConfig& cfg)
        : m_(m), k_(k), metric_(metric), criterion_(criterion), cfg_(cfg), basis_(m, metric) {
        check_limits(m.size(), k, cfg.limits, "stable_cost_function");
        adjacency_ = std::make_unique<CandAdjacency>(basis_.defs());
        full_ = (1u << m.size()) - 1;
    }

    StabilityReport run() {
        build_grid();
        double cap = cfg_.ratio_cap;
        double rho = std::numeric_limits<double>::infinity();
        while (true) {
            rho = forward_pass(cap, nullptr);
            if (std::isfinite(rho) && rho < cap - 0.05) break;
            cap *= 2.0;
            if (cap > 64.0)
                throw std::runtime_error(
                    "stable transition cost exceeds matching-morph bound; "
                    "numerical or modeling fault");
        }
        // Second pass at the settled ratio records the reachable sets.
        std::vector<std::vector<std::pair<uint64_t, float>>> maps(grid_.size());
        const double cap2 = rho * (1.0 + 1e-7) + 1e-12;
        forward_pass(cap2, &maps);
        return assemble(rho, cap2, maps);
    }

private:
    struct Sample {
        double t = 0.0;
        double u = 0.0;
        double ufloor = 1.0;
    };

    struct Row {
        std::array<int, 4> tuple{};  // sorted candidate ids, k_ used
        uint64_t key = 0;
        double cost = 0.0;
        double ratio = 0.0;
        std::array<uint32_t, 4> shared{};  // coverage of the other k-1 slots
    };

    struct Bucket {
        uint64_t key = 0;
        int slot = 0;
        int row = 0;
    };

    struct Table {
        std::vector<Row> rows;
        std::vector<Bucket> buckets;  // sorted by key
        std::unordered_map<uint64_t, int> index;
    };

    void build_grid() {
        const TimeInterval dom = m_.domain;
        std::vector<double> coarse(cfg_.samples + 1);
        for (int i = 0; i <= cfg_.samples; ++i)
            coarse[i] = dom.lo + dom.length() * i / cfg_.samples;

        // Coarse U estimate drives the event filter: only events whose shapes
        // are within the ratio cap of the local optimum can matter.
        std::vector<double> coarse_u(coarse.size());
        std::vector<int> warm;
        for (size_t i = 0; i < coarse.size(); ++i)
            coarse_u[i] = optimum_at(coarse[i], warm);
        auto u_estimate = [&](double t) {
            const double pos = (t - dom.lo) / dom.length() * cfg_.samples;
            const size_t i = std::min(static_cast<size_t>(std::max(0.0, pos)), coarse_u.size() - 2);
            return std::max(coarse_u[i], coarse_u[i + 1]);
        };
        auto keep = [&](double t, double radius) {
            return radius <= 4.0 * std::max(u_estimate(t), cfg_.eps) + cfg_.eps;
        };
        const auto events =
            event_times(m_, k_, metric_, cfg_.eps, cfg_.event_grid, keep);
        events_ = events;

        std::vector<double> ts(coarse.begin(), coarse.end());
        ts.insert(ts.end(), events.begin(), events.end());
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end(),
                             [&](double a, double b) { return b - a <= cfg_.eps * 0.5; }),
                 ts.end());

        grid_.clear();
        warm.clear();
        for (double t : ts) {
            Sample s;
            s.t = t;
            s.u = optimum_at(t, warm);
            s.ufloor = std::max(s.u, cfg_.eps);
            grid_.push_back(s);
        }
    }

    double optimum_at(double t, std::vector<int>& warm) {
        const auto st = basis_.eval(t, cfg_.eps);
        double upper = std::numeric_limits<double>::infinity();
        if (!warm.empty()) {
            uint32_t mask = 0;
            double cost = 0.0;
            for (int id : warm) {
                mask |= st.masks[id];
                const double r = st.shapes[id].radius;
                cost = criterion_ == Criterion::minmax ? std::max(cost, r) : cost + r;
            }
            if (mask == full_) upper = cost;
        }
        std::vector<int> tuple;
        const double u = optimal_cost_at(st, k_, criterion_, upper, &tuple);
        if (!tuple.empty()) warm = tuple;
        return u;
    }

    Table enumerate(const CandidateBasis::State& st, const Sample& s, double cap) {
        Table table;
        const double limit = cap * s.ufloor * (1.0 + 1e-12) + 1e-15;
        std::vector<int> allowed;
        for (int id : st.by_radius) {
            if (st.shapes[id].radius > limit) break;
            allowed.push_back(id);
        }
        const int a = static_cast<int>(allowed.size());
        std::vector<uint32_t> suffix_or(a + 1, 0);
        for (int i = a - 1; i >= 0; --i) suffix_or[i] = suffix_or[i + 1] | st.masks[allowed[i]];

        std::array<int, 4> chosen{};
        auto emit = [&](double cost) {
            Row row;
            row.tuple = chosen;
            std::sort(row.tuple.begin(), row.tuple.begin() + k_);
            row.key = pack_tuple(std::span<const int>(row.tuple.data(), k_));
            row.cost = cost;
            row.ratio = cost / s.ufloor;
            std::array<uint32_t, 4> pre{}, suf{};
            uint32_t acc = 0;
            for (int i = 0; i < k_; ++i) {
                pre[i] = acc;
                acc |= st.masks[row.tuple[i]];
            }
            acc = 0;
            for (int i = k_ - 1; i >= 0; --i) {
                suf[i] = acc;
                acc |= st.masks[row.tuple[i]];
            }
            for (int i = 0; i < k_; ++i) row.shared[i] = pre[i] | suf[i];
            const int idx = static_cast<int>(table.rows.size());
            table.index.emplace(row.key, idx);
            table.rows.push_back(row);
        };
        auto rec = [&](auto&& self, int start, int depth, uint32_t mask, double cost) -> void {
            if (++nodes_ > cfg_.node_budget)
                throw limit_error("stable sweep enumeration budget exceeded; "
                                  "reduce n, k, or --samples");
            if (depth == k_) {
                if (mask == full_) emit(cost);
                return;
            }
            const int slots = k_ - depth;
            for (int i = start; i <= a - slots; ++i) {
                if ((mask | suffix_or[i]) != full_) break;
                const int id = allowed[i];
                const double r = st.shapes[id].radius;
                const double next =
                    criterion_ == Criterion::minmax ? std::max(cost, r) : cost + r;
                if (next > limit) {
                    if (criterion_ == Criterion::minsum) break;
                    continue;
                }
                chosen[depth] = id;
                self(self, i + 1, depth + 1, mask | st.masks[id], next);
            }
        };
        rec(rec, 0, 0, 0u, 0.0);

        table.buckets.reserve(table.rows.size() * k_);
        for (int rix = 0; rix < static_cast<int>(table.rows.size()); ++rix) {
            const Row& row = table.rows[rix];
            for (int sIdx = 0; sIdx < k_; ++sIdx) {
                if (sIdx > 0 && row.tuple[sIdx] == row.tuple[sIdx - 1]) continue;
                std::array<int, 4> rest{};
                int rn = 0;
                for (int rr = 0; rr < k_; ++rr)
                    if (rr != sIdx) rest[rn++] = row.tuple[rr];
                table.buckets.push_back(
                    {pack_tuple(std::span<const int>(rest.data(), rn)), sIdx, rix});
            }
        }
        std::sort(table.buckets.begin(), table.buckets.end(),
                  [](const Bucket& x, const Bucket& y) { return x.key < y.key; });
        return table;
    }

    // Bottleneck Dijkstra inside one sample over transferred seed ratios.
    void relax_sample(const Table& table, std::vector<double>& r_val,
                      std::vector<int>* pred) const {
        using Entry = std::pair<double, int>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
        for (int v = 0; v < static_cast<int>(r_val.size()); ++v)
            if (std::isfinite(r_val[v])) heap.push({r_val[v], v});
        while (!heap.empty()) {
            auto [d, v] = heap.top();
            heap.pop();
            if (d > r_val[v]) continue;
            const Row& row = table.rows[v];
            for (int sIdx = 0; sIdx < k_; ++sIdx) {
                if (sIdx > 0 && row.tuple[sIdx] == row.tuple[sIdx - 1]) continue;
                std::array<int, 4> rest{};
                int rn = 0;
                for (int rr = 0; rr < k_; ++rr)
                    if (rr != sIdx) rest[rn++] = row.tuple[rr];
                const uint64_t bkey = pack_tuple(std::span<const int>(rest.data(), rn));
                const bool reloc = row.shared[sIdx] == full_;
                auto it = std::lower_bound(
                    table.buckets.begin(), table.buckets.end(), bkey,
                    [](const Bucket& b, uint64_t kk) { return b.key < kk; });
                for (; it != table.buckets.end() && it->key == bkey; ++it) {
                    const int w = it->row;
                    if (w == v) continue;
                    const int other = table.rows[w].tuple[it->slot];
                    if (!reloc && !(*adjacency_)(row.tuple[sIdx], other)) continue;
                    const double nd = std::max(d, table.rows[w].ratio);
                    if (nd < r_val[w]) {
                        r_val[w] = nd;
                        if (pred) (*pred)[w] = v;
                        heap.push({nd, w});
                    }
                }
            }
        }
    }

    double forward_pass(double cap, std::vector<std::vector<std::pair<uint64_t, float>>>* maps) {
        nodes_ = 0;
        std::unordered_map<uint64_t, double> prev;
        for (size_t j = 0; j < grid_.size(); ++j) {
            const auto st = basis_.eval(grid_[j].t, cfg_.eps);
            Table table = enumerate(st, grid_[j], cap);
            std::vector<double> r_val(table.rows.size(),
                                      std::numeric_limits<double>::infinity());
            bool any = false;
            for (size_t v = 0; v < table.rows.size(); ++v) {
                if (j == 0) {
                    r_val[v] = table.rows[v].ratio;
                    any = true;
                } else if (auto it = prev.find(table.rows[v].key); it != prev.end()) {
                    r_val[v] = std::max(it->second, table.rows[v].ratio);
                    any = true;
                }
            }
            if (!any) return std::numeric_limits<double>::infinity();
            if (j > 0) relax_sample(table, r_val, nullptr);
            prev.clear();
            for (size_t v = 0; v < table.rows.size(); ++v)
                if (std::isfinite(r_val[v])) prev.emplace(table.rows[v].key, r_val[v]);
            if (maps) {
                // float precision suffices here: the stored maps only gate
                // reachability during witness reconstruction
                auto& mp = (*maps)[j];
                mp.clear();
                mp.reserve(prev.size());
                for (auto& [key, r] : prev) mp.emplace_back(key, static_cast<float>(r));
                std::sort(mp.begin(), mp.end());
            }
        }
        double best = std::numeric_limits<double>::infinity();
        for (auto& [key, r] : prev) best = std::min(best, r);
        return best;
    }

    static float lookup(const std::vector<std::pair<uint64_t, float>>& mp, uint64_t key) {
        auto it = std::lower_bound(mp.begin(), mp.end(),
                                   std::make_pair(key, -std::numeric_limits<float>::infinity()));
        if (it != mp.end() && it->first == key) return it->second;
        return std::numeric_limits<float>::infinity();
    }

    StabilityReport assemble(double rho, double cap2,
                             const std::vector<std::vector<std::pair<uint64_t, float>>>& maps) {
        const size_t n_samples = grid_.size();
        // Occupancy, reconstructed backward: stay when the previous sample
        // already reached this vertex, otherwise splice in a swap chain.
        std::vector<uint64_t> occupied(n_samples);
        std::vector<std::vector<int>> chains(n_samples);  // row chains per sample
        std::vector<Table> chain_tables(n_samples);

        {
            const auto& last = maps.back();
            float best = std::numeric_limits<float>::infinity();
            for (auto& [key, r] : last)
                if (r < best) {
                    best = r;
                    occupied[n_samples - 1] = key;
                }
        }
        for (size_t j = n_samples - 1; j > 0; --j) {
            const uint64_t cur = occupied[j];
            if (lookup(maps[j - 1], cur) < std::numeric_limits<float>::infinity()) {
                occupied[j - 1] = cur;  // stayed
                continue;
            }
            // Reconstruct the chain inside sample j from some previous vertex.
            const auto st = basis_.eval(grid_[j].t, cfg_.eps);
            Table table = enumerate(st, grid_[j], cap2);
            std::vector<double> r_val(table.rows.size(),
                                      std::numeric_limits<double>::infinity());
            std::vector<int> pred(table.rows.size(), -1);
            for (size_t v = 0; v < table.rows.size(); ++v) {
                const float pr = lookup(maps[j - 1], table.rows[v].key);
                if (pr < std::numeric_limits<float>::infinity())
                    r_val[v] = std::max(static_cast<double>(pr), table.rows[v].ratio);
            }
            relax_sample(table, r_val, &pred);
            auto target = table.index.find(cur);
            if (target == table.index.end())
                throw std::runtime_error("stable sweep: witness reconstruction lost its vertex");
            std::vector<int> chain;
            for (int v = target->second; v != -1; v = pred[v]) chain.push_back(v);
            std::reverse(chain.begin(), chain.end());
            occupied[j - 1] = table.rows[chain.front()].key;
            chains[j] = std::move(chain);
            chain_tables[j] = std::move(table);
        }

        return finalize(rho, occupied, chains, chain_tables);
    }

    StabilityReport finalize(double rho, const std::vector<uint64_t>& occupied,
                             const std::vector<std::vector<int>>& chains,
                             const std::vector<Table>& chain_tables) {
        StabilityReport rep;
        rep.eps_floor = cfg_.eps;
        rep.events = events_;
        rep.ratio = std::max(1.0, rho);
        rep.witness.assign(k_, ShapeTrack{metric_, {}});

        std::vector<int> slots;  // ordered tuple tracked across swaps
        double worst = -1.0;
        for (size_t j = 0; j < grid_.size(); ++j) {
            const double t = grid_[j].t;
            const auto pos = m_.positions(t);
            auto shapes_of = [&](const std::vector<int>& tuple) {
                std::vector<Shape> out;
                for (int id : tuple) out.push_back(shape_of(basis_.def(id), pos, metric_));
                return out;
            };
            auto push_keys = [&](double at, const std::vector<Shape>& shapes) {
                for (int sIdx = 0; sIdx < k_; ++sIdx)
                    rep.witness[sIdx].keys.push_back(
                        {at, shapes[sIdx].center, shapes[sIdx].radius});
            };

            double stable_cost = 0.0;
            if (j == 0 || chains[j].empty()) {
                if (j == 0) slots = unpack(occupied[0]);
                const auto shapes = shapes_of(slots);
                push_keys(t, shapes);
                stable_cost = cover_cost(shapes, criterion_);
            } else {
                const Table& table = chain_tables[j];
                const auto& chain = chains[j];
                const double gap_after =
                    j + 1 < grid_.size() ? grid_[j + 1].t - t : t - grid_[j - 1].t;
                const double window = 0.4 * gap_after;
                const double dir = j + 1 < grid_.size() ? 1.0 : -1.0;
                const int steps = static_cast<int>(chain.size()) - 1;

                TransitionRecord record;
                record.t = t;
                auto shapes = shapes_of(slots);
                push_keys(dir > 0 ? t : t - window, shapes);
                stable_cost = cover_cost(shapes, criterion_);
                record.chain.push_back(
                    {defs_of(slots), cover_cost(shapes, criterion_)});
                for (int step = 1; step <= steps; ++step) {
                    apply_step(slots, table.rows[chain[step - 1]], table.rows[chain[step]]);
                    shapes = shapes_of(slots);
                    const double at = dir > 0 ? t + window * step / steps
                                              : t - window + window * step / steps;
                    push_keys(at, shapes);
                    const double c = cover_cost(shapes, criterion_);
                    stable_cost = std::max(stable_cost, c);
                    record.chain.push_back({defs_of(slots), c});
                }
                record.bottleneck_cost = stable_cost;
                record.bottleneck_ratio = stable_cost / grid_[j].ufloor;
                rep.transitions.push_back(std::move(record));
            }
            rep.timeline.push_back({t, grid_[j].u, stable_cost});
            const double r = stable_cost / grid_[j].ufloor;
            if (r > worst) {
                worst = r;
                rep.argmax_time = t;
            }
        }
        return rep;
    }

    std::vector<int> unpack(uint64_t key) const {
        std::vector<int> tuple(k_);
        for (int i = k_ - 1; i >= 0; --i) {
            tuple[i] = static_cast<int>(key & 1023u);
            key >>= 10;
        }
        return tuple;
    }

    std::vector<DefiningSet> defs_of(const std::vector<int>& tuple) const {
        std::vector<DefiningSet> out;
        for (int id : tuple) out.push_back(basis_.def(id));
        return out;
    }

    // Replace, in the ordered slot list, the one candidate in which the two
    // sorted rows differ.
    void apply_step(std::vector<int>& slots, const Row& from, const Row& to) const {
        std::vector<int> removed, added;
        int i = 0, j = 0;
        while (i < k_ || j < k_) {
            if (i < k_ && j < k_ && from.tuple[i] == to.tuple[j]) {
                ++i;
                ++j;
            } else if (j >= k_ || (i < k_ && from.tuple[i] < to.tuple[j])) {
                removed.push_back(from.tuple[i++]);
            } else {
                added.push_back(to.tuple[j++]);
            }
        }
        if (removed.size() != 1 || added.size() != 1)
            throw std::runtime_error("stable sweep: chain step is not a single swap");
        for (int& s : slots)
            if (s == removed[0]) {
                s = added[0];
                return;
            }
        throw std::runtime_error("stable sweep: slot bookkeeping lost a candidate");
    }

    const MovingPointSet& m_;
    int k_;
    Metric metric_;
    Criterion criterion_;
    SweepConfig cfg_;
    CandidateBasis basis_;
    std::unique_ptr<CandAdjacency> adjacency_;
    uint32_t full_ = 0;
    std::vector<Sample> grid_;
    std::vector<double> events_;
    size_t nodes_ = 0;
};

}  // namespace detail

// Best stable trajectory through the time-varying swap graph, its cost
// function S(t), and the instance stability ratio sup S/U.
inline StabilityReport instance_ratio(const MovingPointSet& m, int k, Metric metric,
                                      Criterion criterion, const SweepConfig& cfg = {}) {
    detail::StableSweep sweep(m, k, metric, criterion, cfg);
    return sweep.run();
}

inline CostFunction stable_cost_function(const MovingPointSet& m, int k, Metric metric,
                                         Criterion criterion, const SweepConfig& cfg = {},
                                         StabilityReport* report_out = nullptr) {
    StabilityReport rep = instance_ratio(m, k, metric, criterion, cfg);
    CostFunction s;
    s.breakpoints = rep.events;
    s.refine_abs = cfg.eps;
    for (const TimelinePoint& p : rep.timeline) s.samples.emplace_back(p.t, p.stable);
    if (report_out) *report_out = std::move(rep);
    return s;
}

}  // namespace kcenter
