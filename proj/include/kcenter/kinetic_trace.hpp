#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "kcenter/motion.hpp"
#include "kcenter/static_solver.hpp"

namespace kcenter {

// Piecewise numeric function of time: event breakpoints plus certified
// samples. eval() interpolates between samples and falls back to the exact
// resolver whenever the neighbouring samples disagree by more than the
// refinement tolerance.
struct CostFunction {
    std::vector<double> breakpoints;                 // sorted event times
    std::vector<std::pair<double, double>> samples;  // sorted (t, cost)
    std::function<double(double)> resolver;          // optional exact re-solve
    double refine_abs = 1e-9;
    double refine_rel = 0.01;

    double eval(double t) const {
        if (samples.empty()) return resolver ? resolver(t) : 0.0;
        auto it = std::lower_bound(samples.begin(), samples.end(), t,
                                   [](const auto& s, double v) { return s.first < v; });
        if (it == samples.begin()) return exact_or(it->second, t);
        if (it == samples.end()) return exact_or(std::prev(it)->second, t);
        const auto [t1, c1] = *std::prev(it);
        const auto [t2, c2] = *it;
        const double gap = std::abs(c2 - c1);
        if (resolver && gap > refine_abs && gap > refine_rel * std::max(std::abs(c1), std::abs(c2)))
            return resolver(t);
        const double u = t2 > t1 ? (t - t1) / (t2 - t1) : 0.0;
        return c1 + u * (c2 - c1);
    }

private:
    double exact_or(double fallback, double t) const { return resolver ? resolver(t) : fallback; }
};

namespace detail {

// Index sets are global and time-independent; radii, centers and coverage
// masks are evaluated per time sample. The same basis backs event detection,
// the unstable trace and the stable sweep.
class CandidateBasis {
public:
    CandidateBasis(const MovingPointSet& m, Metric metric) : m_(&m), metric_(metric) {
        const int n = static_cast<int>(m.size());
        auto emit = [&](std::vector<int> idx) {
            const size_t plain = defs_.size();
            defs_.push_back({idx, ExtremeTag::centered});
            plain_ids_.push_back(static_cast<int>(plain));
            if (metric_ == Metric::rectilinear && idx.size() > 1) {
                defs_.push_back({idx, ExtremeTag::low});
                defs_.push_back({std::move(idx), ExtremeTag::high});
            }
        };
        for (int i = 0; i < n; ++i) emit({i});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) emit({i, j});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int l = j + 1; l < n; ++l) emit({i, j, l});
    }

    const MovingPointSet& motion() const { return *m_; }
    Metric metric() const { return metric_; }
    size_t size() const { return defs_.size(); }
    const DefiningSet& def(size_t c) const { return defs_[c]; }
    const std::vector<DefiningSet>& defs() const { return defs_; }
    // One candidate per index set (tag = centered); radii do not depend on tags.
    const std::vector<int>& plain_ids() const { return plain_ids_; }

    Shape shape_at(size_t c, double t) const {
        return shape_of(defs_[c], m_->positions(t), metric_);
    }
    double radius_at(size_t c, double t) const { return shape_at(c, t).radius; }

    struct State {
        double t = 0.0;
        std::vector<Point> positions;
        std::vector<Shape> shapes;   // per candidate
        std::vector<uint32_t> masks;  // per candidate coverage
        std::vector<int> by_radius;   // candidate ids sorted by radius
        uint32_t full = 0;
    };

    State eval(double t, double tol) const {
        State st;
        st.t = t;
        st.positions = m_->positions(t);
        st.full = (1u << st.positions.size()) - 1;
        st.shapes.reserve(defs_.size());
        st.masks.reserve(defs_.size());
        for (const DefiningSet& d : defs_) {
            Shape s = shape_of(d, st.positions, metric_);
            st.masks.push_back(coverage_mask(s, st.positions, tol));
            st.shapes.push_back(s);
        }
        st.by_radius.resize(defs_.size());
        for (size_t i = 0; i < defs_.size(); ++i) st.by_radius[i] = static_cast<int>(i);
        std::stable_sort(st.by_radius.begin(), st.by_radius.end(), [&](int a, int b) {
            return st.shapes[a].radius < st.shapes[b].radius;
        });
        return st;
    }

private:
    const MovingPointSet* m_;
    Metric metric_;
    std::vector<DefiningSet> defs_;
    std::vector<int> plain_ids_;
};

// Exact optimum over candidate covers from a prepared state. `upper` is a
// known feasible cost used as the initial branch-and-bound ceiling (pass
// +inf when nothing is known). When best_tuple is given it receives the
// optimal candidate ids, or stays empty if nothing beat `upper`.
inline double optimal_cost_at(const CandidateBasis::State& st, int k, Criterion criterion,
                              double upper, std::vector<int>* best_tuple = nullptr) {
    const auto& order = st.by_radius;
    const int m = static_cast<int>(order.size());
    std::vector<uint32_t> suffix_or(m + 1, 0);
    for (int i = m - 1; i >= 0; --i) suffix_or[i] = suffix_or[i + 1] | st.masks[order[i]];

    double best = upper;
    if (best_tuple) best_tuple->clear();
    std::vector<int> chosen;
    auto rec = [&](auto&& self, int start, uint32_t mask, double cost, int slots) -> void {
        if (mask == st.full) {
            if (cost < best) {  // spare slots are free singletons
                best = cost;
                if (best_tuple) *best_tuple = chosen;
            }
            return;
        }
        if (slots == 0) return;
        for (int i = start; i < m; ++i) {
            if ((mask | suffix_or[i]) != st.full) break;
            const double r = st.shapes[order[i]].radius;
            const double next = criterion == Criterion::minmax ? std::max(cost, r) : cost + r;
            if (next >= best) break;
            if ((st.masks[order[i]] & ~mask) == 0) continue;  // adds nothing
            chosen.push_back(order[i]);
            self(self, i + 1, mask | st.masks[order[i]], next, slots - 1);
            chosen.pop_back();
        }
    };
    rec(rec, 0, 0, 0.0, k);
    return best;
}

}  // namespace detail

// Times at which the combinatorial structure of candidate covers can change:
// radius-curve equalities between candidate shapes, points crossing candidate
// shape boundaries, and triple relevance boundaries. Deduplicated within eps.
// The optional keep(t, radius) filter can discard events whose shapes are too
// large to matter for the caller.
inline std::vector<double> event_times(const MovingPointSet& m, int k, Metric metric, double eps,
                                       int grid = 2048,
                                       const std::function<bool(double, double)>& keep = {}) {
    (void)k;  // the event set is shared by all k
    detail::CandidateBasis basis(m, metric);
    const TimeInterval dom = m.domain;
    const int n = static_cast<int>(m.size());
    grid = std::max(grid, 64);

    // Radius tables on a uniform grid; sign changes are then bisected with
    // direct evaluation. Boundary clearances are streamed per candidate.
    const auto& plain = basis.plain_ids();
    const int pc = static_cast<int>(plain.size());
    std::vector<double> ts(grid + 1);
    for (int g = 0; g <= grid; ++g) ts[g] = dom.lo + dom.length() * g / grid;

    std::vector<std::vector<Point>> pos_at(grid + 1);
    for (int g = 0; g <= grid; ++g) pos_at[g] = m.positions(ts[g]);

    std::vector<std::vector<double>> rad(pc, std::vector<double>(grid + 1));
    for (int g = 0; g <= grid; ++g)
        for (int c = 0; c < pc; ++c)
            rad[c][g] = shape_of(basis.def(plain[c]), pos_at[g], metric).radius;

    std::vector<double> events{dom.lo, dom.hi};
    auto bisect = [&](const std::function<double(double)>& f, double a, double b, double fa) {
        while (b - a > eps) {
            const double mid = 0.5 * (a + b);
            const double fm = f(mid);
            if (fm == 0.0) return mid;
            if ((fa < 0.0) != (fm < 0.0)) {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        return 0.5 * (a + b);
    };
    // Exact zeros on the grid count as events only at the ends of a zero
    // stretch; identically coincident curves produce none.
    auto scan = [&](const std::function<double(double)>& f, const double* table,
                    const std::function<double(double)>& scale) {
        for (int g = 0; g <= grid; ++g) {
            double root;
            if (table[g] == 0.0) {
                const bool prev_nz = g > 0 && table[g - 1] != 0.0;
                const bool next_nz = g < grid && table[g + 1] != 0.0;
                if (!prev_nz && !next_nz) continue;
                root = ts[g];
            } else if (g < grid && table[g + 1] != 0.0 &&
                       (table[g] < 0.0) != (table[g + 1] < 0.0)) {
                root = bisect(f, ts[g], ts[g + 1], table[g]);
            } else {
                continue;
            }
            if (!keep || keep(root, scale(root))) events.push_back(root);
        }
    };

    // (a) radius-curve equalities
    std::vector<double> diff(grid + 1);
    for (int a = 0; a < pc; ++a)
        for (int b = a + 1; b < pc; ++b) {
            for (int g = 0; g <= grid; ++g) diff[g] = rad[a][g] - rad[b][g];
            const int ca = plain[a], cb = plain[b];
            scan([&](double t) { return basis.radius_at(ca, t) - basis.radius_at(cb, t); },
                 diff.data(), [&](double t) { return basis.radius_at(ca, t); });
        }
    // (b) point-on-boundary crossings
    std::vector<double> row(grid + 1);
    for (size_t c = 0; c < basis.size(); ++c) {
        const auto& idx = basis.def(c).indices;
        std::vector<Shape> cshape(grid + 1);
        for (int g = 0; g <= grid; ++g) cshape[g] = shape_of(basis.def(c), pos_at[g], metric);
        for (int p = 0; p < n; ++p) {
            if (std::find(idx.begin(), idx.end(), p) != idx.end()) continue;
            for (int g = 0; g <= grid; ++g)
                row[g] = distance(metric, cshape[g].center, pos_at[g][p]) - cshape[g].radius;
            scan(
                [&](double t) {
                    const Shape s = basis.shape_at(c, t);
                    return distance(metric, s.center, m.position(p, t)) - s.radius;
                },
                row.data(), [&](double t) { return basis.radius_at(c, t); });
        }
    }
    // (c) triple relevance boundaries
    if (metric == Metric::euclidean) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int l = j + 1; l < n; ++l)
                    for (const TimeInterval& iv : triple_relevance_intervals(m, i, j, l, eps)) {
                        auto triple_radius = [&](double t) {
                            const auto pos = m.positions(t);
                            return min_enclosing_disk(std::vector<Point>{pos[i], pos[j], pos[l]})
                                .radius;
                        };
                        if (!keep || keep(iv.lo, triple_radius(iv.lo))) events.push_back(iv.lo);
                        if (!keep || keep(iv.hi, triple_radius(iv.hi))) events.push_back(iv.hi);
                    }
    }

    std::sort(events.begin(), events.end());
    std::vector<double> out;
    for (double t : events) {
        if (t < dom.lo - eps || t > dom.hi + eps) continue;
        t = std::clamp(t, dom.lo, dom.hi);
        if (out.empty() || t - out.back() > eps) out.push_back(t);
    }
    if (out.empty() || out.front() != dom.lo) out.insert(out.begin(), dom.lo);
    if (out.back() != dom.hi) out.push_back(dom.hi);
    return out;
}

// U(t): the optimal (unstable) cost over time, represented by event
// breakpoints and refined per-interval samples; exact re-solving backs eval().
inline CostFunction unstable_cost_function(const MovingPointSet& m, int k, Metric metric,
                                           Criterion criterion, double eps = kDefaultTol,
                                           const Limits& limits = {}, int event_grid = 2048) {
    detail::check_limits(m.size(), k, limits, "unstable_cost_function");
    auto basis = std::make_shared<detail::CandidateBasis>(m, metric);
    auto solve_at = [basis, k, criterion, eps](double t) {
        const auto st = basis->eval(t, eps);
        return detail::optimal_cost_at(st, k, criterion,
                                       std::numeric_limits<double>::infinity());
    };

    CostFunction u;
    u.breakpoints = event_times(m, k, metric, eps, event_grid);
    u.refine_abs = std::max(eps, 1e-12);
    u.resolver = solve_at;

    constexpr int kFloorSamples = 64;
    for (size_t b = 0; b + 1 < u.breakpoints.size(); ++b) {
        const double lo = u.breakpoints[b], hi = u.breakpoints[b + 1];
        for (int s = 0; s < kFloorSamples; ++s) {
            const double t = lo + (hi - lo) * s / kFloorSamples;
            u.samples.emplace_back(t, solve_at(t));
        }
    }
    u.samples.emplace_back(m.domain.hi, solve_at(m.domain.hi));

    // Refine until neighbouring samples agree to 1% relative or eps absolute.
    std::vector<std::pair<double, double>> refined;
    std::function<void(double, double, double, double, int)> subdivide =
        [&](double t1, double c1, double t2, double c2, int depth) {
            const double gap = std::abs(c2 - c1);
            if (depth >= 12 || t2 - t1 <= eps ||
                (gap <= u.refine_abs || gap <= u.refine_rel * std::max(c1, c2))) {
                refined.emplace_back(t2, c2);
                return;
            }
            const double tm = 0.5 * (t1 + t2);
            const double cm = solve_at(tm);
            subdivide(t1, c1, tm, cm, depth + 1);
            subdivide(tm, cm, t2, c2, depth + 1);
        };
    refined.push_back(u.samples.front());
    for (size_t i = 0; i + 1 < u.samples.size(); ++i)
        subdivide(u.samples[i].first, u.samples[i].second, u.samples[i + 1].first,
                  u.samples[i + 1].second, 0);
    u.samples = std::move(refined);
    return u;
}

// True when the shape of the defining set, at time t, can be the largest shape
// of a valid k-cover: the points it leaves uncovered admit a (k-1)-cover with
// no larger radius.
inline bool maxcurve_check(const MovingPointSet& m, const DefiningSet& def, double t, int k,
                           Metric metric, double tol = kDefaultTol, const Limits& limits = {}) {
    detail::check_limits(m.size(), k, limits, "maxcurve_check");
    const auto pos = m.positions(t);
    const Shape s = shape_of(def, pos, metric);
    std::vector<Point> rest;
    for (const Point& p : pos)
        if (!covers(s, p, tol)) rest.push_back(p);
    if (rest.empty()) return true;
    if (k <= 1) return false;
    const double rest_cost =
        solve_static(rest, std::min(k - 1, static_cast<int>(rest.size())), metric,
                     Criterion::minmax, tol, limits)
            .cost;
    return rest_cost <= s.radius + tol;
}

}  // namespace kcenter
