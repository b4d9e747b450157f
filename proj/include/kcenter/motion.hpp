#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kcenter/geometry.hpp"

namespace kcenter {

// Dense univariate polynomial, coefficients in ascending degree order.
struct Polynomial {
    std::vector<double> coeffs{0.0};

    Polynomial() = default;
    Polynomial(std::initializer_list<double> c) : coeffs(c) {
        if (coeffs.empty()) coeffs.push_back(0.0);
    }
    explicit Polynomial(std::vector<double> c) : coeffs(std::move(c)) {
        if (coeffs.empty()) coeffs.push_back(0.0);
    }

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    double operator()(double t) const {
        double v = 0.0;
        for (size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
        return v;
    }
};

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
    return Polynomial{std::move(c)};
}

inline Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
    return Polynomial{std::move(c)};
}

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
    return Polynomial{std::move(c)};
}

inline Polynomial operator*(double s, const Polynomial& a) {
    Polynomial r = a;
    for (double& c : r.coeffs) c *= s;
    return r;
}

struct TimeInterval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
    bool contains(double t, double tol = 0.0) const { return t >= lo - tol && t <= hi + tol; }
};

struct MovingPoint {
    Polynomial x, y;
    Point at(double t) const { return {x(t), y(t)}; }
};

inline constexpr int kDefaultMaxDegree = 3;

// n points with polynomial coordinate trajectories over a shared closed domain.
struct MovingPointSet {
    std::vector<MovingPoint> points;
    TimeInterval domain{0.0, 1.0};

    size_t size() const { return points.size(); }

    Point position(size_t i, double t) const {
        if (i >= points.size()) throw std::out_of_range("point index out of range");
        if (!domain.contains(t, 1e-12 * (1.0 + std::abs(domain.hi - domain.lo))))
            throw std::domain_error("time outside trajectory domain");
        return points[i].at(t);
    }

    std::vector<Point> positions(double t) const {
        std::vector<Point> out;
        out.reserve(points.size());
        for (size_t i = 0; i < points.size(); ++i) out.push_back(position(i, t));
        return out;
    }

    int max_degree() const {
        int d = 0;
        for (const auto& p : points) d = std::max({d, p.x.degree(), p.y.degree()});
        return d;
    }
};

// Squared radius of the diametral disk of points i and j: |p_i - p_j|^2 / 4.
inline Polynomial pair_radius_sq(const MovingPointSet& m, size_t i, size_t j) {
    if (i == j) throw std::invalid_argument("pair_radius_sq needs distinct indices");
    const Polynomial dx = m.points[i].x - m.points[j].x;
    const Polynomial dy = m.points[i].y - m.points[j].y;
    return 0.25 * (dx * dx + dy * dy);
}

// All sign-change roots of f on the interval, isolated on a uniform grid and
// bisected down to width eps. Tangential (non-crossing) roots can be missed.
inline std::vector<double> find_roots(const std::function<double(double)>& f, TimeInterval iv,
                                      double eps, int samples = 2048) {
    if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
    std::vector<double> roots;
    if (iv.length() <= 0.0) return roots;
    samples = std::max(samples, 2);
    auto push = [&](double r) {
        if (roots.empty() || r - roots.back() > eps) roots.push_back(r);
    };
    std::vector<double> grid_t(samples + 1), grid_v(samples + 1);
    for (int g = 0; g <= samples; ++g) {
        grid_t[g] = iv.lo + iv.length() * g / samples;
        grid_v[g] = f(grid_t[g]);
    }
    for (int g = 0; g <= samples; ++g) {
        // Exact zeros count only at the ends of a zero stretch, so an
        // identically-zero f yields no roots.
        if (grid_v[g] == 0.0) {
            const bool prev_nz = g > 0 && grid_v[g - 1] != 0.0;
            const bool next_nz = g < samples && grid_v[g + 1] != 0.0;
            if (prev_nz || next_nz) push(grid_t[g]);
            continue;
        }
        if (g == samples || grid_v[g + 1] == 0.0 || (grid_v[g] < 0.0) == (grid_v[g + 1] < 0.0))
            continue;
        double a = grid_t[g], b = grid_t[g + 1], fa = grid_v[g];
        while (b - a > eps) {
            const double mid = 0.5 * (a + b);
            const double fm = f(mid);
            if (fm == 0.0) {
                a = b = mid;
                break;
            }
            if ((fa < 0.0) != (fm < 0.0)) {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        push(0.5 * (a + b));
    }
    return roots;
}

// Maximal intervals on which the circumdisk of the three moving points is
// their minimum covering disk, i.e. no triangle angle is obtuse. The boundary
// predicate per vertex v with opposite side (a,b) is |va|^2 + |vb|^2 - |ab|^2.
inline std::vector<TimeInterval> triple_relevance_intervals(const MovingPointSet& m, size_t i,
                                                            size_t j, size_t l, double eps) {
    if (i == j || j == l || i == l)
        throw std::invalid_argument("triple_relevance_intervals needs distinct indices");
    const Polynomial dij = 4.0 * pair_radius_sq(m, i, j);  // squared distances
    const Polynomial djl = 4.0 * pair_radius_sq(m, j, l);
    const Polynomial dil = 4.0 * pair_radius_sq(m, i, l);
    const Polynomial h_i = dij + dil - djl;  // angle at i
    const Polynomial h_j = dij + djl - dil;
    const Polynomial h_l = dil + djl - dij;

    std::vector<double> cuts{m.domain.lo, m.domain.hi};
    for (const Polynomial* h : {&h_i, &h_j, &h_l}) {
        auto r = find_roots([h](double t) { return (*h)(t); }, m.domain, eps);
        cuts.insert(cuts.end(), r.begin(), r.end());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [eps](double a, double b) { return b - a <= eps; }),
               cuts.end());
    if (cuts.back() < m.domain.hi) cuts.push_back(m.domain.hi);

    // Scale-aware slack so grazing-right triangles count as relevant.
    auto relevant_at = [&](double t) {
        const double scale = std::max({std::abs(dij(t)), std::abs(djl(t)), std::abs(dil(t)), 1.0});
        const double slack = 1e-9 * scale;
        return h_i(t) >= -slack && h_j(t) >= -slack && h_l(t) >= -slack;
    };

    std::vector<TimeInterval> out;
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
        if (!relevant_at(0.5 * (cuts[c] + cuts[c + 1]))) continue;
        if (!out.empty() && std::abs(out.back().hi - cuts[c]) <= eps) {
            out.back().hi = cuts[c + 1];
        } else {
            out.push_back({cuts[c], cuts[c + 1]});
        }
    }
    return out;
}

}  // namespace kcenter
