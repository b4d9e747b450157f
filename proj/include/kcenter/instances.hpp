#pragma once

#include <map>
#include <numbers>
#include <random>
#include <string>

#include "kcenter/motion.hpp"

namespace kcenter {

// A generated instance plus the problem variant it is meant to exercise.
struct Construction {
    std::string name;
    MovingPointSet motion;
    int k = 2;
    Metric metric = Metric::euclidean;
    Criterion criterion = Criterion::minmax;
    std::map<std::string, double> metadata;
};

namespace detail {

inline MovingPoint linear_point(Point at_half, Point velocity) {
    // position(t) = at_half + velocity * (t - 1/2)
    return {Polynomial{at_half.x - 0.5 * velocity.x, velocity.x},
            Polynomial{at_half.y - 0.5 * velocity.y, velocity.y}};
}

}  // namespace detail

// 2k points that form a regular 2k-gon on the unit circle at t = 1/2, moving
// along the circle's tangents with alternating orientation. Speeds are scaled
// so the two families of pair coincidences land at t = 1/4 and t = 3/4.
inline Construction gen_ngon(int k) {
    if (k < 2) throw std::invalid_argument("gen_ngon requires k >= 2");
    Construction c;
    c.name = "ngon";
    c.k = k;
    c.metric = Metric::euclidean;
    c.criterion = Criterion::minmax;
    const double speed = 4.0 * std::tan(std::numbers::pi / (2.0 * k));
    c.metadata["speed"] = speed;
    c.metadata["coincidence_lo"] = 0.25;
    c.metadata["coincidence_hi"] = 0.75;
    for (int j = 0; j < 2 * k; ++j) {
        const double ang = std::numbers::pi * j / k;
        const Point pos{std::cos(ang), std::sin(ang)};
        const double orient = (j % 2 == 0) ? 1.0 : -1.0;
        const Point vel{-orient * speed * std::sin(ang), orient * speed * std::cos(ang)};
        c.motion.points.push_back(detail::linear_point(pos, vel));
    }
    return c;
}

// Four points on the lines y=1, x=1, y=-1, x=-1 sweeping through the cross
// positions (0,1),(1,0),(0,-1),(-1,0) at t = 1/2; the optimal rectilinear
// 2-center pairing flips there.
inline Construction gen_rect_cross() {
    Construction c;
    c.name = "rect_cross";
    c.k = 2;
    c.metric = Metric::rectilinear;
    c.criterion = Criterion::minmax;
    c.motion.points.push_back(detail::linear_point({0, 1}, {2, 0}));
    c.motion.points.push_back(detail::linear_point({1, 0}, {0, 2}));
    c.motion.points.push_back(detail::linear_point({0, -1}, {-2, 0}));
    c.motion.points.push_back(detail::linear_point({-1, 0}, {0, -2}));
    return c;
}

// A stationary origin plus two points sliding down the y-axis through
// (0,1),(0,-1) at t = 1/2, and k-2 far-away stationary points. The minsum
// optimum switches which outer point shares a disk with the origin.
inline Construction gen_minsum_line(int k) {
    if (k < 2) throw std::invalid_argument("gen_minsum_line requires k >= 2");
    Construction c;
    c.name = "minsum_line";
    c.k = k;
    c.metric = Metric::euclidean;
    c.criterion = Criterion::minsum;
    c.motion.points.push_back(detail::linear_point({0, 0}, {0, 0}));
    c.motion.points.push_back(detail::linear_point({0, 1}, {0, -2}));
    c.motion.points.push_back(detail::linear_point({0, -1}, {0, -2}));
    for (int i = 0; i < k - 2; ++i)
        c.motion.points.push_back(detail::linear_point({100.0 * (i + 1), 50.0}, {0, 0}));
    return c;
}

// Two far-apart groups for k = 3: the pair a,b converges while c,d diverges,
// so the third disk must cross the gap when the optimum flips. Keeping the
// solution stable costs (almost) nothing in radius but arbitrary speed.
inline Construction gen_lipschitz(double separation) {
    if (separation <= 0.0) throw std::invalid_argument("gen_lipschitz requires separation > 0");
    Construction c;
    c.name = "lipschitz";
    c.k = 3;
    c.metric = Metric::euclidean;
    c.criterion = Criterion::minmax;
    c.metadata["separation"] = separation;
    c.motion.points.push_back(detail::linear_point({0, 0}, {0, -2}));  // a
    c.motion.points.push_back(detail::linear_point({0, 0}, {0, 2}));   // b
    c.motion.points.push_back(detail::linear_point({separation, 0.5}, {0, 1}));   // c
    c.motion.points.push_back(detail::linear_point({separation, -0.5}, {0, -1}));  // d
    return c;
}

// Reproducible random instance with coefficient-bounded polynomial
// trajectories of the given degree.
inline Construction gen_random(int n, int degree, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_random requires n >= 1");
    if (degree < 0 || degree > kDefaultMaxDegree)
        throw std::invalid_argument("gen_random: degree out of range");
    Construction c;
    c.name = "random";
    c.k = std::min(2, n);
    c.metric = Metric::euclidean;
    c.criterion = Criterion::minmax;
    c.metadata["seed"] = static_cast<double>(seed);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
        MovingPoint p;
        p.x.coeffs.assign(degree + 1, 0.0);
        p.y.coeffs.assign(degree + 1, 0.0);
        for (int d = 0; d <= degree; ++d) {
            p.x.coeffs[d] = coeff(rng);
            p.y.coeffs[d] = coeff(rng);
        }
        c.motion.points.push_back(std::move(p));
    }
    return c;
}

}  // namespace kcenter
