// Acceptance suite: end-to-end checks of the library and CLI against the
// known closed-form answers and independent oracles. Prints one line per
// criterion; exits with the number of failures.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "kcenter/cli_app.hpp"

using namespace kcenter;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int id, const std::string& name, bool ok, const std::string& detail,
            double seconds) {
    std::printf("[%s] %d. %s  (%s, %.1fs)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "kcenter_acceptance";
    fs::create_directories(dir);
    return dir;
}

// Runs the CLI entry point with stdout captured to a string.
int run_cli_captured(std::vector<std::string> args, std::string& captured) {
    const fs::path out = work_dir() / "stdout.txt";
    std::fflush(stdout);
    const int saved = dup(fileno(stdout));
    FILE* redirected = std::freopen(out.string().c_str(), "w", stdout);
    const int code = redirected ? cli::run(std::move(args)) : -1;
    std::fflush(stdout);
    dup2(saved, fileno(stdout));
    close(saved);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    captured = ss.str();
    return code;
}

json ratio_summary(const std::string& instance_path, int max_k, int samples) {
    std::string captured;
    std::vector<std::string> args{"ratio", "--instance", instance_path, "--samples",
                                  std::to_string(samples)};
    if (max_k > 3) {
        args.push_back("--max-k");
        args.push_back(std::to_string(max_k));
    }
    const int code = run_cli_captured(std::move(args), captured);
    if (code != 0) throw std::runtime_error("ratio command failed with exit code " +
                                            std::to_string(code));
    return json::parse(captured);
}

std::string gen_instance(const std::string& kind, std::vector<std::string> extra) {
    const fs::path path = work_dir() / (kind + ".json");
    std::vector<std::string> args{"gen", kind, "--out", path.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    std::string ignored;
    if (run_cli_captured(std::move(args), ignored) != 0)
        throw std::runtime_error("gen command failed");
    return path.string();
}

// --- criterion 1-3: stability ratios -------------------------------------

void criterion_ratios_euclidean() {
    const struct {
        int k;
        double want;
    } cases[] = {{2, 1.4142136}, {3, 1.7320508}, {4, 1.8477591}};
    bool ok = true;
    std::ostringstream detail;
    Timer total;
    for (const auto& c : cases) {
        Timer per;
        const fs::path path = work_dir() / ("ngon" + std::to_string(c.k) + ".json");
        std::string ignored;
        run_cli_captured({"gen", "ngon", "--k", std::to_string(c.k), "--out", path.string()},
                         ignored);
        const json summary = ratio_summary(path.string(), c.k, 2048);
        const double got = summary["ratio"].get<double>();
        const double elapsed = per.seconds();
        ok = ok && std::abs(got - c.want) <= 1e-6 && elapsed <= 60.0;
        detail << "k=" << c.k << ": " << got << " in " << static_cast<int>(elapsed) << "s  ";
    }
    report(1, "Euclidean minmax stability ratio on tangent 2k-gon instances", ok, detail.str(),
           total.seconds());
}

void criterion_ratio_rectilinear() {
    Timer timer;
    const auto path = gen_instance("rect_cross", {});
    const double got = ratio_summary(path, 2, 2048)["ratio"].get<double>();
    const double elapsed = timer.seconds();
    report(2, "rectilinear minmax ratio 2 on the moving cross",
           std::abs(got - 2.0) <= 1e-6 && elapsed <= 10.0,
           "ratio=" + std::to_string(got), elapsed);
}

void criterion_ratio_minsum() {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;
    for (int k : {2, 3})
        for (const char* metric : {"euclidean", "rectilinear"}) {
            const fs::path path =
                work_dir() / ("minsum" + std::to_string(k) + metric + ".json");
            std::string ignored;
            run_cli_captured({"gen", "minsum_line", "--k", std::to_string(k), "--metric",
                              metric, "--out", path.string()},
                             ignored);
            const double got = ratio_summary(path.string(), k, 2048)["ratio"].get<double>();
            ok = ok && std::abs(got - 2.0) <= 1e-6;
            detail << "k=" << k << "/" << metric[0] << ": " << got << "  ";
        }
    const double elapsed = timer.seconds();
    report(3, "minsum ratio 2 on collinear instances, both metrics",
           ok && elapsed <= 30.0, detail.str(), elapsed);
}

// --- criterion 4: static oracle -------------------------------------------

double partition_oracle(const std::vector<Point>& pts, int k, Metric metric,
                        Criterion criterion) {
    const int n = static_cast<int>(pts.size());
    // group costs memoized per subset mask
    std::vector<double> radius(1u << n, -1.0);
    auto group_radius = [&](uint32_t mask) {
        if (radius[mask] >= 0.0) return radius[mask];
        std::vector<Point> g;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) g.push_back(pts[i]);
        radius[mask] = metric == Metric::euclidean ? min_enclosing_disk(g).radius
                                                   : min_enclosing_square(g).radius;
        return radius[mask];
    };
    double best = std::numeric_limits<double>::infinity();
    std::vector<uint32_t> groups(k, 0);
    std::vector<int> label(n, 0);
    while (true) {
        for (auto& g : groups) g = 0;
        for (int i = 0; i < n; ++i) groups[label[i]] |= 1u << i;
        double cost = 0.0;
        for (uint32_t g : groups) {
            if (g == 0) continue;
            const double r = group_radius(g);
            cost = criterion == Criterion::minmax ? std::max(cost, r) : cost + r;
        }
        best = std::min(best, cost);
        int i = n - 1;
        while (i >= 0 && label[i] == k - 1) label[i--] = 0;
        if (i < 0) break;
        ++label[i];
    }
    return best;
}

void criterion_static_oracle() {
    Timer timer;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-5, 5);
    bool ok = true;
    double worst = 0.0;
    for (int it = 0; it < 500 && ok; ++it) {
        const int n = 3 + static_cast<int>(rng() % 6);
        const int k = 1 + static_cast<int>(rng() % std::min(3, n));
        std::vector<Point> pts;
        for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
        for (Metric metric : {Metric::euclidean, Metric::rectilinear})
            for (Criterion crit : {Criterion::minmax, Criterion::minsum}) {
                const double got = solve_static(pts, k, metric, crit).cost;
                const double want = partition_oracle(pts, k, metric, crit);
                worst = std::max(worst, std::abs(got - want));
                ok = ok && std::abs(got - want) <= 1e-9;
            }
    }
    const double elapsed = timer.seconds();
    report(4, "static solver equals the partition oracle on 500 random instances",
           ok && elapsed <= 300.0, "max deviation " + std::to_string(worst), elapsed);
}

// --- criterion 5: unstable trace landmarks ---------------------------------

void criterion_unstable_trace() {
    Timer timer;
    const auto c = gen_ngon(2);
    const auto u = unstable_cost_function(c.motion, c.k, c.metric, c.criterion);
    const double at_quarter = u.eval(0.25);
    const double at_half = u.eval(0.5);
    const double elapsed = timer.seconds();
    const bool ok = at_quarter <= 1e-6 &&
                    std::abs(at_half - std::sqrt(2.0) / 2.0) <= 1e-6 && elapsed <= 10.0;
    report(5, "unstable trace hits the coincidence zero and the polygon cost", ok,
           "U(1/4)=" + std::to_string(at_quarter) + " U(1/2)=" + std::to_string(at_half),
           elapsed);
}

// --- criterion 6: transition-cost oracle -----------------------------------

double bottleneck_oracle(const SwapGraph& g, int src, int dst) {
    std::vector<double> thresholds;
    for (double c : g.cost)
        if (std::isfinite(c)) thresholds.push_back(c);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    for (double limit : thresholds) {
        if (g.cost[src] > limit || g.cost[dst] > limit) continue;
        std::vector<char> seen(g.vertices.size(), 0);
        std::vector<int> stack{src};
        seen[src] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (v == dst) return limit;
            for (int w : g.neighbors(v))
                if (!seen[w] && g.cost[w] <= limit) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
    }
    return std::numeric_limits<double>::infinity();
}

void criterion_transition_oracle() {
    Timer timer;
    std::mt19937_64 rng(7777);
    std::uniform_real_distribution<double> u(-4, 4);
    bool ok = true;
    for (int it = 0; it < 100 && ok; ++it) {
        const int n = 3 + static_cast<int>(rng() % 4);  // up to 6
        std::vector<Point> pts;
        for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
        const Metric metric = it % 2 ? Metric::rectilinear : Metric::euclidean;
        const Criterion crit = it % 3 ? Criterion::minmax : Criterion::minsum;
        const auto g = build_swap_graph(pts, 2, metric, crit);
        std::vector<int> finite;
        for (size_t v = 0; v < g.vertices.size(); ++v)
            if (std::isfinite(g.cost[v])) finite.push_back(static_cast<int>(v));
        for (int probe = 0; probe < 3 && ok; ++probe) {
            const int src = finite[rng() % finite.size()];
            const int dst = finite[rng() % finite.size()];
            const double got = transition_cost(g, src, dst).cost;
            const double want = bottleneck_oracle(g, src, dst);
            ok = std::abs(got - want) <= 1e-9;
        }
    }
    const double elapsed = timer.seconds();
    report(6, "transition cost equals exhaustive bottleneck search on 100 random instances",
           ok && elapsed <= 120.0, ok ? "all matched" : "mismatch", elapsed);
}

// --- criterion 7: morph bound property suite -------------------------------

void criterion_morph_bounds() {
    Timer timer;
    std::mt19937_64 rng(31337);
    bool ok = true;
    std::ostringstream detail;

    int forests = 0;
    while (forests < 1000 && ok) {
        const int k = 2 + static_cast<int>(rng() % 5);
        const Metric metric = rng() % 2 ? Metric::euclidean : Metric::rectilinear;
        const auto inst = testgen::random_forest_instance(rng, k, metric);
        if (!inst) continue;
        if (!build_intersection_graph(inst->red, inst->blue).is_forest()) continue;
        const auto sched = forest_morph(inst->red, inst->blue, inst->points);
        const auto check = validate_schedule(sched, inst->points, Criterion::minmax, 1024);
        ok = check.covered && check.max_cost <= sched.initial_cost * (1.0 + 1e-9);
        ++forests;
    }
    detail << forests << " forests";

    int matchings = 0, cycles_broken = 0;
    while (matchings < 1000 && ok) {
        std::vector<Point> pts;
        Metric metric = Metric::euclidean;
        Criterion crit = Criterion::minmax;
        switch (rng() % 4) {
            case 0: pts = testgen::random_regular_2kgon(rng, 2 + static_cast<int>(rng() % 2)); break;
            case 1:
                pts = testgen::random_cross(rng);
                metric = Metric::rectilinear;
                break;
            case 2: pts = testgen::random_collinear_triple(rng, false); crit = Criterion::minsum; break;
            default:
                pts = testgen::random_collinear_triple(rng, true);
                metric = Metric::rectilinear;
                crit = Criterion::minsum;
                break;
        }
        const auto covers = all_optimal_covers(pts, 2, metric, crit);
        if (covers.size() < 2) continue;
        const auto sched = matching_morph(covers[0].shapes, covers[1].shapes, pts, crit);
        const auto check = validate_schedule(sched, pts, crit, 1024);
        ok = check.covered && check.max_cost <= 2.0 * sched.initial_cost + 1e-9;
        ++matchings;

        // break_four_cycle whenever its precondition shows up
        if (ok && crit == Criterion::minmax && metric == Metric::euclidean) {
            const auto g = build_intersection_graph(covers[0].shapes, covers[1].shapes);
            bool deg2 = false;
            for (size_t r = 0; r < covers[0].shapes.size(); ++r)
                deg2 = deg2 || g.degree(NodeColor::red, static_cast<int>(r)) == 2;
            double spread = 0.0;
            for (const Shape& s : covers[0].shapes)
                spread = std::max(spread, std::abs(s.radius - covers[0].shapes[0].radius));
            if (!g.is_forest() && deg2 && spread <= 1e-9) {
                const auto res = break_four_cycle(covers[0].shapes, covers[1].shapes, pts);
                ok = res.factor <= std::sqrt(2.0) + 1e-9 &&
                     validate_schedule(res.prefix, pts, Criterion::minmax, 1024).covered;
                ++cycles_broken;
            }
        }
    }
    detail << ", " << matchings << " matchings, " << cycles_broken << " 4-cycles";
    const double elapsed = timer.seconds();
    report(7, "morph growth bounds hold across the random property suite", ok && elapsed <= 300.0,
           detail.str(), elapsed);
}

// --- criterion 8: closed forms ---------------------------------------------

void criterion_closed_forms() {
    Timer timer;
    bool ok = std::abs(cycle_bound(3) - (1.0 + std::sqrt(7.0)) / 2.0) <= 1e-12;
    for (int k = 2; k <= 10; ++k)
        ok = ok && cycle_bound(k) >= 2.0 * std::sin(std::numbers::pi * (k - 1) / (2.0 * k));
    report(8, "cycle growth closed form and its lower-bound dominance", ok,
           "cycle_bound(3)=" + std::to_string(cycle_bound(3)), timer.seconds());
}

// --- criterion 9: unbounded witness speed ----------------------------------

void criterion_witness_speed() {
    Timer timer;
    std::vector<double> speeds;
    bool ok = true;
    std::ostringstream detail;
    for (double s : {10.0, 100.0, 1000.0}) {
        const fs::path path = work_dir() / ("lipschitz" + std::to_string(int(s)) + ".json");
        std::string ignored;
        run_cli_captured({"gen", "lipschitz", "--separation", std::to_string(s), "--out",
                          path.string()},
                         ignored);
        const json summary = ratio_summary(path.string(), 3, 2048);
        speeds.push_back(summary["max_witness_speed"].get<double>());
        ok = ok && std::isfinite(speeds.back());
        detail << "s=" << int(s) << ": " << speeds.back() << "  ";
    }
    for (size_t i = 0; i + 1 < speeds.size(); ++i) ok = ok && speeds[i + 1] / speeds[i] >= 5.0;
    const double elapsed = timer.seconds();
    report(9, "stable witness speed grows with the group separation", ok && elapsed <= 30.0,
           detail.str(), elapsed);
}

}  // namespace

int main() {
    criterion_ratios_euclidean();
    criterion_ratio_rectilinear();
    criterion_ratio_minsum();
    criterion_static_oracle();
    criterion_unstable_trace();
    criterion_transition_oracle();
    criterion_morph_bounds();
    criterion_closed_forms();
    criterion_witness_speed();
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
