#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "kcenter/instances.hpp"
#include "kcenter/morph.hpp"
#include "kcenter/stability.hpp"
#include "kcenter/static_solver.hpp"

namespace kcenter {

using nlohmann::json;

// On-disk instance: problem variant plus polynomial trajectories.
struct InstanceFile {
    int k = 1;
    Metric metric = Metric::euclidean;
    Criterion criterion = Criterion::minmax;
    MovingPointSet motion;
    std::map<std::string, double> metadata;
};

inline std::string to_string(Metric m) {
    return m == Metric::euclidean ? "euclidean" : "rectilinear";
}
inline std::string to_string(Criterion c) { return c == Criterion::minmax ? "minmax" : "minsum"; }
inline std::string to_string(ExtremeTag t) {
    switch (t) {
        case ExtremeTag::low: return "low";
        case ExtremeTag::high: return "high";
        default: return "centered";
    }
}

inline Metric metric_from_string(const std::string& s) {
    if (s == "euclidean") return Metric::euclidean;
    if (s == "rectilinear") return Metric::rectilinear;
    throw schema_error("metric must be \"euclidean\" or \"rectilinear\", got \"" + s + "\"");
}
inline Criterion criterion_from_string(const std::string& s) {
    if (s == "minmax") return Criterion::minmax;
    if (s == "minsum") return Criterion::minsum;
    throw schema_error("criterion must be \"minmax\" or \"minsum\", got \"" + s + "\"");
}

namespace detail {

inline std::vector<double> coeff_list(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty())
        throw schema_error(what + " must be a nonempty array of coefficients");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw schema_error(what + " contains a non-numeric coefficient");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw schema_error(what + " contains a non-finite coefficient");
        out.push_back(d);
    }
    return out;
}

}  // namespace detail

inline InstanceFile parse_instance(const json& j) {
    if (!j.is_object()) throw schema_error("instance must be a JSON object");
    for (const char* field : {"k", "metric", "criterion", "points"})
        if (!j.contains(field)) throw schema_error(std::string("instance missing field \"") + field + "\"");
    InstanceFile f;
    if (!j["k"].is_number_integer() || j["k"].get<int>() < 1)
        throw schema_error("k must be an integer >= 1");
    f.k = j["k"].get<int>();
    f.metric = metric_from_string(j["metric"].get<std::string>());
    f.criterion = criterion_from_string(j["criterion"].get<std::string>());
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
            throw schema_error("domain must be [t0, t1]");
        f.motion.domain = {d[0].get<double>(), d[1].get<double>()};
        if (!(f.motion.domain.lo < f.motion.domain.hi))
            throw schema_error("domain must satisfy t0 < t1");
    }
    if (!j["points"].is_array() || j["points"].empty())
        throw schema_error("points must be a nonempty array");
    for (const auto& p : j["points"]) {
        if (!p.is_object() || !p.contains("x") || !p.contains("y"))
            throw schema_error("each point needs coefficient lists \"x\" and \"y\"");
        MovingPoint mp;
        mp.x = Polynomial{detail::coeff_list(p["x"], "point x")};
        mp.y = Polynomial{detail::coeff_list(p["y"], "point y")};
        f.motion.points.push_back(std::move(mp));
    }
    if (f.k > static_cast<int>(f.motion.points.size()))
        throw schema_error("k exceeds the number of points");
    if (j.contains("metadata") && j["metadata"].is_object())
        for (auto& [key, val] : j["metadata"].items())
            if (val.is_number()) f.metadata[key] = val.get<double>();
    return f;
}

inline json to_json(const InstanceFile& f) {
    json j;
    j["k"] = f.k;
    j["metric"] = to_string(f.metric);
    j["criterion"] = to_string(f.criterion);
    j["domain"] = {f.motion.domain.lo, f.motion.domain.hi};
    j["points"] = json::array();
    for (const auto& p : f.motion.points)
        j["points"].push_back({{"x", p.x.coeffs}, {"y", p.y.coeffs}});
    if (!f.metadata.empty()) j["metadata"] = f.metadata;
    return j;
}

inline InstanceFile instance_from_construction(const Construction& c) {
    InstanceFile f;
    f.k = c.k;
    f.metric = c.metric;
    f.criterion = c.criterion;
    f.motion = c.motion;
    f.metadata = c.metadata;
    return f;
}

inline InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open instance file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw schema_error("invalid JSON in " + path + ": " + e.what());
    }
    return parse_instance(j);
}

inline json to_json(const DefiningSet& d, Metric metric) {
    json j;
    j["indices"] = d.indices;
    if (metric == Metric::rectilinear) j["tag"] = to_string(d.tag);
    return j;
}

inline json to_json(const Shape& s) {
    return {{"metric", to_string(s.metric)},
            {"center", {s.center.x, s.center.y}},
            {"radius", s.radius}};
}

inline json cover_to_json(const CandidateCover& cover, double cost, Metric metric) {
    json j;
    j["cost"] = cost;
    j["shapes"] = json::array();
    for (const Shape& s : cover.shapes) j["shapes"].push_back(to_json(s));
    j["defining_sets"] = json::array();
    for (const DefiningSet& d : cover.defining_sets) j["defining_sets"].push_back(to_json(d, metric));
    j["disk_sets"] = cover.disk_sets;
    return j;
}

inline json schedule_to_json(const MorphSchedule& s) {
    json j;
    j["initial_cost"] = s.initial_cost;
    j["growth_factor"] = s.growth_factor;
    j["tracks"] = json::array();
    for (const ShapeTrack& tr : s.tracks) {
        json keys = json::array();
        for (const Keyframe& kf : tr.keys)
            keys.push_back({{"t", kf.time}, {"center", {kf.center.x, kf.center.y}},
                            {"radius", kf.radius}});
        j["tracks"].push_back({{"metric", to_string(tr.metric)}, {"keyframes", keys}});
    }
    return j;
}

inline json report_summary_json(const StabilityReport& rep, Metric metric) {
    json j;
    j["ratio"] = rep.ratio;
    j["argmax_time"] = rep.argmax_time;
    j["eps_floor"] = rep.eps_floor;
    j["max_witness_speed"] = measure_max_speed(rep.witness);
    j["transition_log"] = json::array();
    for (const TransitionRecord& tr : rep.transitions) {
        json steps = json::array();
        for (const SwapStep& st : tr.chain) {
            json defs = json::array();
            for (const DefiningSet& d : st.defining_sets) defs.push_back(to_json(d, metric));
            steps.push_back({{"defining_sets", defs}, {"cost", st.cost}});
        }
        j["transition_log"].push_back({{"t", tr.t},
                                       {"bottleneck_cost", tr.bottleneck_cost},
                                       {"bottleneck_ratio", tr.bottleneck_ratio},
                                       {"chain", steps}});
    }
    return j;
}

// CSV emitters; fixed headers, 12 significant digits.
inline void write_trace_csv(std::ostream& os, const std::vector<std::pair<double, double>>& rows) {
    os << "t,cost\n" << std::setprecision(12);
    for (auto [t, c] : rows) os << t << ',' << c << '\n';
}

inline void write_ratio_csv(std::ostream& os, const StabilityReport& rep) {
    os << "t,unstable,stable,ratio\n" << std::setprecision(12);
    for (const TimelinePoint& p : rep.timeline)
        os << p.t << ',' << p.unstable << ',' << p.stable << ','
           << p.stable / std::max(p.unstable, rep.eps_floor) << '\n';
}

// Static SVG snapshot: points in black, the moving cover in red, an optional
// target cover dashed in blue.
inline void write_svg(std::ostream& os, std::span<const Shape> current,
                      std::span<const Shape> target, std::span<const Point> points) {
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    auto grow = [&](Point c, double r) {
        lo_x = std::min(lo_x, c.x - r);
        hi_x = std::max(hi_x, c.x + r);
        lo_y = std::min(lo_y, c.y - r);
        hi_y = std::max(hi_y, c.y + r);
    };
    for (const Shape& s : current) grow(s.center, s.radius);
    for (const Shape& s : target) grow(s.center, s.radius);
    for (const Point& p : points) grow(p, 0.0);
    const double pad = 0.1 * std::max(hi_x - lo_x, hi_y - lo_y) + 0.1;
    lo_x -= pad, hi_x += pad, lo_y -= pad, hi_y += pad;

    os << std::setprecision(10);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << lo_x << ' ' << -hi_y << ' '
       << (hi_x - lo_x) << ' ' << (hi_y - lo_y) << "\">\n";
    const double stroke = 0.01 * std::max(hi_x - lo_x, hi_y - lo_y);
    auto emit_shape = [&](const Shape& s, const char* color, bool dashed) {
        os << "  ";
        // SVG y grows downward; mirror the y coordinate.
        if (s.metric == Metric::euclidean) {
            os << "<circle cx=\"" << s.center.x << "\" cy=\"" << -s.center.y << "\" r=\""
               << s.radius << "\"";
        } else {
            os << "<rect x=\"" << s.center.x - s.radius << "\" y=\"" << -s.center.y - s.radius
               << "\" width=\"" << 2 * s.radius << "\" height=\"" << 2 * s.radius << "\"";
        }
        os << " fill=\"" << color << "\" fill-opacity=\"0.08\" stroke=\"" << color
           << "\" stroke-width=\"" << stroke << "\"";
        if (dashed) os << " stroke-dasharray=\"" << 4 * stroke << ' ' << 2 * stroke << "\"";
        os << "/>\n";
    };
    for (const Shape& s : target) emit_shape(s, "blue", true);
    for (const Shape& s : current) emit_shape(s, "red", false);
    for (const Point& p : points)
        os << "  <circle cx=\"" << p.x << "\" cy=\"" << -p.y << "\" r=\"" << 1.5 * stroke
           << "\" fill=\"black\"/>\n";
    os << "</svg>\n";
}

}  // namespace kcenter
