#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kcenter/instance_io.hpp"

namespace kcenter::cli {

namespace detail {

struct CommonOpts {
    double eps = 1e-9;
    int samples = 2048;
    int max_n = 12;
    int max_k = 3;
};

inline void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--eps", opts.eps, "numeric tolerance for events and comparisons")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--samples", opts.samples, "time samples per sweep/trace")
        ->check(CLI::Range(2, 1 << 20));
    cmd->add_option("--max-n", opts.max_n, "point-count limit (runtime grows like O(n^{3k}))");
    cmd->add_option("--max-k", opts.max_k, "k limit (runtime grows like O(n^{3k}))");
}

inline Limits limits_of(const CommonOpts& opts) {
    if (opts.max_n > 12 || opts.max_k > 3)
        std::cerr << "warning: raised limits; enumeration grows like O(n^{3k})\n";
    return Limits{opts.max_n, opts.max_k};
}

inline void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw schema_error("cannot write to " + path);
    out << text;
}

inline InstanceFile load_checked(const std::string& path, const CommonOpts& opts) {
    InstanceFile f = load_instance(path);
    if (static_cast<int>(f.motion.size()) > opts.max_n)
        throw limit_error("instance has n=" + std::to_string(f.motion.size()) +
                          " points, over --max-n=" + std::to_string(opts.max_n));
    if (f.k > opts.max_k)
        throw limit_error("instance has k=" + std::to_string(f.k) + ", over --max-k=" +
                          std::to_string(opts.max_k));
    if (f.motion.max_degree() > kDefaultMaxDegree)
        throw limit_error("trajectory degree " + std::to_string(f.motion.max_degree()) +
                          " exceeds the supported maximum " + std::to_string(kDefaultMaxDegree));
    return f;
}

}  // namespace detail

// Runs the command-line tool; returns the process exit code (0 ok, 2 schema
// error, 3 limit violation).
inline int run(std::vector<std::string> args) {
    CLI::App app{"exact k-center solving, tracing, morphing and stability analysis "
                 "for points moving on polynomial trajectories"};
    app.require_subcommand(1);

    detail::CommonOpts opts;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a benchmark instance");
    std::string gen_kind;
    gen->add_option("construction", gen_kind, "ngon | rect_cross | minsum_line | lipschitz | random")
        ->required();
    int gen_k = 2, gen_n = 5, gen_degree = 1;
    double gen_separation = 100.0;
    uint64_t gen_seed = 1;
    std::string gen_out, gen_metric, gen_criterion;
    gen->add_option("--k", gen_k, "number of covering shapes (ngon, minsum_line)");
    gen->add_option("--separation", gen_separation, "group distance (lipschitz)");
    gen->add_option("--n", gen_n, "point count (random)");
    gen->add_option("--degree", gen_degree, "trajectory degree (random)");
    gen->add_option("--seed", gen_seed, "rng seed (random)");
    gen->add_option("--metric", gen_metric, "override metric: euclidean | rectilinear");
    gen->add_option("--criterion", gen_criterion, "override criterion: minmax | minsum");
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "solve the static problem at a fixed time");
    std::string solve_instance, solve_out;
    double solve_t = 0.5;
    solve->add_option("--instance", solve_instance, "instance JSON file")->required();
    solve->add_option("--t", solve_t, "evaluation time")->required();
    solve->add_option("--out", solve_out, "output file (default stdout)");
    detail::add_common(solve, opts);

    // trace
    auto* trace = app.add_subcommand("trace", "trace the optimal cost over time to CSV");
    std::string trace_instance, trace_out;
    trace->add_option("--instance", trace_instance, "instance JSON file")->required();
    trace->add_option("--out", trace_out, "CSV output file (default stdout)");
    detail::add_common(trace, opts);

    // ratio
    auto* ratio = app.add_subcommand(
        "ratio", "compute unstable vs stable cost over time and the stability ratio");
    std::string ratio_instance, ratio_out;
    ratio->add_option("--instance", ratio_instance, "instance JSON file")->required();
    ratio->add_option("--out", ratio_out, "timeline CSV output file (omit to skip)");
    detail::add_common(ratio, opts);

    // morph
    auto* morph = app.add_subcommand("morph", "morph between two optimal covers at a fixed time");
    std::string morph_instance, morph_out, morph_criterion, morph_svg_dir;
    double morph_t = 0.5;
    int morph_frames = 9;
    morph->add_option("--instance", morph_instance, "instance JSON file")->required();
    morph->add_option("--t", morph_t, "evaluation time");
    morph->add_option("--criterion", morph_criterion, "override criterion: minmax | minsum");
    morph->add_option("--svg-dir", morph_svg_dir, "directory for SVG frames");
    morph->add_option("--frames", morph_frames, "number of SVG frames")->check(CLI::Range(2, 999));
    morph->add_option("--out", morph_out, "schedule JSON output (default stdout)");
    detail::add_common(morph, opts);

    std::vector<const char*> argv{"kcenter"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen->parsed()) {
            Construction c;
            if (gen_kind == "ngon") {
                c = gen_ngon(gen_k);
            } else if (gen_kind == "rect_cross") {
                c = gen_rect_cross();
            } else if (gen_kind == "minsum_line") {
                c = gen_minsum_line(gen_k);
            } else if (gen_kind == "lipschitz") {
                c = gen_lipschitz(gen_separation);
            } else if (gen_kind == "random") {
                c = gen_random(gen_n, gen_degree, gen_seed);
            } else {
                throw schema_error("unknown construction \"" + gen_kind + "\"");
            }
            InstanceFile f = instance_from_construction(c);
            if (!gen_metric.empty()) f.metric = metric_from_string(gen_metric);
            if (!gen_criterion.empty()) f.criterion = criterion_from_string(gen_criterion);
            detail::write_text(gen_out, to_json(f).dump(2) + "\n");
            return 0;
        }
        if (solve->parsed()) {
            const InstanceFile f = detail::load_checked(solve_instance, opts);
            const auto pos = f.motion.positions(solve_t);
            const auto res = solve_static(pos, f.k, f.metric, f.criterion, opts.eps,
                                          detail::limits_of(opts));
            json j = cover_to_json(res.cover, res.cost, f.metric);
            j["t"] = solve_t;
            detail::write_text(solve_out, j.dump(2) + "\n");
            return 0;
        }
        if (trace->parsed()) {
            const InstanceFile f = detail::load_checked(trace_instance, opts);
            const CostFunction u =
                unstable_cost_function(f.motion, f.k, f.metric, f.criterion, opts.eps,
                                       detail::limits_of(opts), std::min(opts.samples, 4096));
            std::ostringstream os;
            write_trace_csv(os, u.samples);
            detail::write_text(trace_out, os.str());
            return 0;
        }
        if (ratio->parsed()) {
            const InstanceFile f = detail::load_checked(ratio_instance, opts);
            SweepConfig cfg;
            cfg.eps = opts.eps;
            cfg.samples = opts.samples;
            cfg.limits = detail::limits_of(opts);
            const StabilityReport rep =
                instance_ratio(f.motion, f.k, f.metric, f.criterion, cfg);
            if (!ratio_out.empty()) {
                std::ostringstream os;
                write_ratio_csv(os, rep);
                detail::write_text(ratio_out, os.str());
            }
            std::cout << report_summary_json(rep, f.metric).dump(2) << "\n";
            return 0;
        }
        if (morph->parsed()) {
            const InstanceFile f = detail::load_checked(morph_instance, opts);
            const Criterion crit = morph_criterion.empty()
                                       ? f.criterion
                                       : criterion_from_string(morph_criterion);
            const auto pos = f.motion.positions(morph_t);
            const auto covers =
                all_optimal_covers(pos, f.k, f.metric, crit, opts.eps, detail::limits_of(opts));
            MorphSchedule sched;
            std::vector<Shape> target;
            if (covers.size() >= 2) {
                const auto& red = covers[0].shapes;
                const auto& blue = covers[1].shapes;
                target = blue;
                bool equal_radii = true;
                for (const Shape& s : red)
                    equal_radii = equal_radii && std::abs(s.radius - red[0].radius) <= opts.eps;
                for (const Shape& s : blue)
                    equal_radii = equal_radii && std::abs(s.radius - red[0].radius) <= opts.eps;
                const bool forest = build_intersection_graph(red, blue, opts.eps).is_forest();
                sched = (forest && equal_radii) ? forest_morph(red, blue, pos, opts.eps)
                                                : matching_morph(red, blue, pos, crit, opts.eps);
            } else {
                // unique optimum: the identity schedule
                target = covers[0].shapes;
                for (const Shape& s : covers[0].shapes)
                    sched.tracks.push_back(kcenter::detail::static_track(s));
                sched.initial_cost = cover_cost(covers[0].shapes, crit);
                sched.growth_factor = 1.0;
            }
            json j = schedule_to_json(sched);
            j["t"] = morph_t;
            j["optima_found"] = covers.size();
            const auto check = validate_schedule(sched, pos, crit, 1024, opts.eps);
            j["validated"] = check.covered;
            j["max_cost"] = check.max_cost;
            detail::write_text(morph_out, j.dump(2) + "\n");
            if (!morph_svg_dir.empty()) {
                std::filesystem::create_directories(morph_svg_dir);
                for (int fr = 0; fr < morph_frames; ++fr) {
                    const double s = static_cast<double>(fr) / (morph_frames - 1);
                    char name[32];
                    std::snprintf(name, sizeof(name), "morph_%03d.svg", fr);
                    std::ofstream svg(std::filesystem::path(morph_svg_dir) / name);
                    write_svg(svg, sched.shapes_at(s), target, pos);
                }
            }
            return 0;
        }
    } catch (const schema_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace kcenter::cli
