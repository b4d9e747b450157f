#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kcenter/motion.hpp"

using namespace kcenter;

namespace {

MovingPointSet two_points(MovingPoint a, MovingPoint b) {
    MovingPointSet m;
    m.points = {std::move(a), std::move(b)};
    return m;
}

}  // namespace

TEST_CASE("position evaluates polynomials and guards the domain") {
    MovingPointSet m;
    m.points.push_back({Polynomial{0.0, 1.0}, Polynomial{0.0}});   // (t, 0)
    m.points.push_back({Polynomial{2.5}, Polynomial{-1.0}});       // constant
    m.points.push_back({Polynomial{1.0, -2.0}, Polynomial{1.0}});  // (1-2t, 1)

    CHECK(m.position(0, 0.5).x == 0.5);
    CHECK(m.position(0, 0.5).y == 0.0);
    CHECK(m.position(1, 0.123).x == 2.5);
    CHECK(m.position(1, 0.9).y == -1.0);
    CHECK_THAT(m.position(2, 1.0).x, Catch::Matchers::WithinAbs(-1.0, 1e-12));
    CHECK(m.position(2, 1.0).y == 1.0);

    CHECK_THROWS_AS(m.position(0, 1.5), std::domain_error);
    CHECK_THROWS_AS(m.position(0, -0.2), std::domain_error);
    CHECK_THROWS_AS(m.position(9, 0.5), std::out_of_range);
}

TEST_CASE("pair_radius_sq equals the squared half-distance") {
    // points (t, 0) and (-t, 0): diametral radius t, squared t^2
    auto m = two_points({Polynomial{0.0, 1.0}, Polynomial{0.0}},
                        {Polynomial{0.0, -1.0}, Polynomial{0.0}});
    const Polynomial r2 = pair_radius_sq(m, 0, 1);
    CHECK_THAT(r2(0.3), Catch::Matchers::WithinAbs(0.09, 1e-12));
    CHECK_THAT(r2(1.0), Catch::Matchers::WithinAbs(1.0, 1e-12));

    // coincident trajectories: identically zero
    auto z = two_points({Polynomial{1.0, 2.0}, Polynomial{0.5, -1.0}},
                        {Polynomial{1.0, 2.0}, Polynomial{0.5, -1.0}});
    const Polynomial zero = pair_radius_sq(z, 0, 1);
    for (double t : {0.0, 0.25, 0.7, 1.0}) CHECK(zero(t) == 0.0);

    auto s = two_points({Polynomial{0.0}, Polynomial{0.0}}, {Polynomial{2.0}, Polynomial{0.0}});
    CHECK(pair_radius_sq(s, 0, 1)(0.42) == 1.0);

    CHECK_THROWS_AS(pair_radius_sq(m, 1, 1), std::invalid_argument);
}

TEST_CASE("pair_radius_sq agrees with direct evaluation at random times") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> c(-2, 2), tt(0, 1);
    for (int it = 0; it < 10; ++it) {
        MovingPointSet m;
        for (int i = 0; i < 4; ++i) {
            MovingPoint p;
            p.x.coeffs.resize(4);
            p.y.coeffs.resize(4);
            for (int d = 0; d <= 3; ++d) {
                p.x.coeffs[d] = c(rng);
                p.y.coeffs[d] = c(rng);
            }
            m.points.push_back(std::move(p));
        }
        const Polynomial r2 = pair_radius_sq(m, 0, 3);
        for (int probe = 0; probe < 100; ++probe) {
            const double t = tt(rng);
            const double want = 0.25 * sq_dist(m.position(0, t), m.position(3, t));
            REQUIRE_THAT(r2(t), Catch::Matchers::WithinAbs(want, 1e-9));
        }
    }
}

TEST_CASE("find_roots isolates simple sign changes") {
    const TimeInterval unit{0.0, 1.0};
    const auto linear = find_roots([](double t) { return t - 0.5; }, unit, 1e-9);
    REQUIRE(linear.size() == 1);
    CHECK_THAT(linear[0], Catch::Matchers::WithinAbs(0.5, 1e-9));

    // roots of t^2 - t + 0.21 at 0.3 and 0.7 (quadratic formula)
    const auto quad = find_roots([](double t) { return t * t - t + 0.21; }, unit, 1e-9);
    REQUIRE(quad.size() == 2);
    CHECK_THAT(quad[0], Catch::Matchers::WithinAbs(0.3, 1e-8));
    CHECK_THAT(quad[1], Catch::Matchers::WithinAbs(0.7, 1e-8));

    CHECK(find_roots([](double) { return 1.0; }, unit, 1e-9).empty());
    CHECK_THROWS_AS(find_roots([](double t) { return t; }, unit, 0.0), std::invalid_argument);
}

TEST_CASE("find_roots residuals are small and roots are separated") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> c(-1, 1);
    const double eps = 1e-9;
    for (int it = 0; it < 50; ++it) {
        Polynomial f{c(rng), c(rng), c(rng), c(rng)};
        const auto roots = find_roots([&](double t) { return f(t); }, {0.0, 1.0}, eps);
        for (size_t i = 0; i < roots.size(); ++i) {
            const double slope =
                std::abs(f(std::min(1.0, roots[i] + 1e-6)) - f(std::max(0.0, roots[i] - 1e-6))) /
                2e-6;
            CHECK(std::abs(f(roots[i])) <= 10.0 * eps * std::max(1.0, slope));
            if (i > 0) CHECK(roots[i] - roots[i - 1] > eps);
        }
    }
}

TEST_CASE("triple relevance of static configurations") {
    auto static_triple = [](Point a, Point b, Point c) {
        MovingPointSet m;
        m.points.push_back({Polynomial{a.x}, Polynomial{a.y}});
        m.points.push_back({Polynomial{b.x}, Polynomial{b.y}});
        m.points.push_back({Polynomial{c.x}, Polynomial{c.y}});
        return m;
    };
    // equilateral: relevant on the whole domain
    const auto eq = static_triple({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
    auto iv = triple_relevance_intervals(eq, 0, 1, 2, 1e-9);
    REQUIRE(iv.size() == 1);
    CHECK(iv[0].lo == 0.0);
    CHECK(iv[0].hi == 1.0);

    // obtuse: never relevant
    const auto ob = static_triple({0, 0}, {4, 0}, {1, 1});
    CHECK(triple_relevance_intervals(ob, 0, 1, 2, 1e-9).empty());

    CHECK_THROWS_AS(triple_relevance_intervals(eq, 0, 0, 2, 1e-9), std::invalid_argument);
}

TEST_CASE("a triple passing through collinearity yields at most two intervals") {
    // p2 crosses the segment's line at t = 0.5; near the crossing the triangle
    // is obtuse, near the ends it is acute.
    MovingPointSet m;
    m.points.push_back({Polynomial{0.0}, Polynomial{0.0}});
    m.points.push_back({Polynomial{1.0}, Polynomial{0.0}});
    m.points.push_back({Polynomial{0.5}, Polynomial{-1.0, 2.0}});  // (0.5, 2t-1)
    const auto iv = triple_relevance_intervals(m, 0, 1, 2, 1e-9);
    REQUIRE(iv.size() == 2);
    CHECK(iv[0].lo == 0.0);
    CHECK(iv[1].hi == 1.0);
    CHECK(iv[0].hi < 0.5);
    CHECK(iv[1].lo > 0.5);
    // static check inside/outside the reported intervals
    for (double t : {0.05, 0.95}) {
        const auto pos = m.positions(t);
        CHECK(try_circumdisk(pos[0], pos[1], pos[2]).has_value());
    }
}
