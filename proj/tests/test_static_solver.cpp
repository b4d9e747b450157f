#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kcenter/static_solver.hpp"

using namespace kcenter;

namespace {

// Independent oracle: enumerate every assignment of points to k groups and
// cover each group with its minimum enclosing shape.
double partition_oracle(const std::vector<Point>& pts, int k, Metric metric,
                        Criterion criterion) {
    const int n = static_cast<int>(pts.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> label(n, 0);
    std::vector<std::vector<Point>> groups(k);
    while (true) {
        for (auto& g : groups) g.clear();
        for (int i = 0; i < n; ++i) groups[label[i]].push_back(pts[i]);
        double cost = 0.0;
        for (const auto& g : groups) {
            if (g.empty()) continue;
            const double r = metric == Metric::euclidean
                                 ? min_enclosing_disk(g).radius
                                 : 0.5 * [&] {
                                       double lox = g[0].x, hix = g[0].x, loy = g[0].y,
                                              hiy = g[0].y;
                                       for (const Point& p : g) {
                                           lox = std::min(lox, p.x), hix = std::max(hix, p.x);
                                           loy = std::min(loy, p.y), hiy = std::max(hiy, p.y);
                                       }
                                       return std::max(hix - lox, hiy - loy);
                                   }();
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

std::vector<Point> random_points(std::mt19937_64& rng, int n, double span = 5.0) {
    std::uniform_real_distribution<double> u(-span, span);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    return pts;
}

const std::vector<Point> kSquare{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
const std::vector<Point> kCross{{0, 1}, {1, 0}, {0, -1}, {-1, 0}};
const std::vector<Point> kCollinear{{0, -1}, {0, 0}, {0, 1}};

std::vector<Point> regular_ngon(int n, double radius = 1.0) {
    std::vector<Point> pts;
    for (int j = 0; j < n; ++j) {
        const double a = 2.0 * std::numbers::pi * j / n;
        pts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return pts;
}

}  // namespace

TEST_CASE("enumerate_candidates counts") {
    const auto three = enumerate_candidates(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}},
                                            Metric::euclidean);
    CHECK(three.size() == 7);  // 3 + 3 + 1

    std::mt19937_64 rng(3);
    const auto four = enumerate_candidates(random_points(rng, 4), Metric::euclidean);
    CHECK(four.size() == 14);  // 4 + 6 + 4, no collinear triples

    const auto collinear = enumerate_candidates(
        std::vector<Point>{{0, 0}, {1, 0}, {2, 0}}, Metric::euclidean);
    CHECK(collinear.size() == 6);  // degenerate triple dropped

    const auto rect = enumerate_candidates(std::vector<Point>{{0, 0}, {1, 0}, {2, 0}},
                                           Metric::rectilinear);
    CHECK(rect.size() == 3 + 3 * 3 + 1 * 3);  // tags on pairs and triples
}

TEST_CASE("solve_static reproduces the known optima") {
    const auto square = solve_static(kSquare, 2, Metric::euclidean, Criterion::minmax);
    CHECK_THAT(square.cost, Catch::Matchers::WithinAbs(std::sqrt(2.0) / 2.0, 1e-9));

    const auto cross = solve_static(kCross, 2, Metric::rectilinear, Criterion::minmax);
    CHECK_THAT(cross.cost, Catch::Matchers::WithinAbs(0.5, 1e-9));

    const auto line = solve_static(kCollinear, 2, Metric::euclidean, Criterion::minsum);
    CHECK_THAT(line.cost, Catch::Matchers::WithinAbs(0.5, 1e-9));
}

TEST_CASE("solve_static validates input and limits") {
    CHECK_THROWS_AS(solve_static(std::vector<Point>{}, 1, Metric::euclidean, Criterion::minmax),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_static(kSquare, 5, Metric::euclidean, Criterion::minmax),
                    std::invalid_argument);
    std::mt19937_64 rng(5);
    CHECK_THROWS_AS(solve_static(random_points(rng, 13), 2, Metric::euclidean, Criterion::minmax),
                    limit_error);
    CHECK_THROWS_AS(
        solve_static(random_points(rng, 4), 5, Metric::euclidean, Criterion::minmax,
                     kDefaultTol, Limits{12, 6}),
        std::invalid_argument);  // k > n still rejected
}

TEST_CASE("solve_static equals the partition oracle on random instances") {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 40; ++it) {
        const int n = 3 + static_cast<int>(rng() % 6);  // up to 8
        const int k = 1 + static_cast<int>(rng() % std::min(3, n));
        const auto pts = random_points(rng, n);
        for (Metric metric : {Metric::euclidean, Metric::rectilinear})
            for (Criterion crit : {Criterion::minmax, Criterion::minsum}) {
                CAPTURE(it, n, k, static_cast<int>(metric), static_cast<int>(crit));
                const auto res = solve_static(pts, k, metric, crit);
                const double want = partition_oracle(pts, k, metric, crit);
                REQUIRE_THAT(res.cost, Catch::Matchers::WithinAbs(want, 1e-9));
                REQUIRE(cover_valid(res.cover.shapes, pts, 1e-9));
            }
    }
}

TEST_CASE("optimal cost is monotone in k and across criteria") {
    std::mt19937_64 rng(43);
    for (int it = 0; it < 25; ++it) {
        const int n = 4 + static_cast<int>(rng() % 4);
        const auto pts = random_points(rng, n);
        for (Metric metric : {Metric::euclidean, Metric::rectilinear}) {
            double prev = std::numeric_limits<double>::infinity();
            for (int k = 1; k <= 3; ++k) {
                const double c = solve_static(pts, k, metric, Criterion::minmax).cost;
                CHECK(c <= prev + 1e-9);
                prev = c;

                const double msum = solve_static(pts, k, metric, Criterion::minsum).cost;
                CHECK(msum <= c * k + 1e-9);
                CHECK(c <= msum + 1e-9);
            }
        }
    }
}

TEST_CASE("disk sets partition the points") {
    std::mt19937_64 rng(47);
    for (int it = 0; it < 20; ++it) {
        const auto pts = random_points(rng, 6);
        const auto res = solve_static(pts, 2, Metric::euclidean, Criterion::minmax);
        std::vector<int> seen(pts.size(), 0);
        for (size_t s = 0; s < res.cover.disk_sets.size(); ++s)
            for (int i : res.cover.disk_sets[s]) {
                ++seen[i];
                CHECK(covers(res.cover.shapes[s], pts[i], 1e-9));
            }
        for (int c : seen) CHECK(c == 1);
    }
}

TEST_CASE("all_optimal_covers finds the expected multiplicities") {
    const auto square = all_optimal_covers(kSquare, 2, Metric::euclidean, Criterion::minmax);
    CHECK(square.size() == 2);

    const auto hexagon =
        all_optimal_covers(regular_ngon(6), 3, Metric::euclidean, Criterion::minmax);
    CHECK(hexagon.size() == 2);

    const auto two = all_optimal_covers(std::vector<Point>{{0, 0}, {5, 5}}, 2, Metric::euclidean,
                                        Criterion::minmax);
    REQUIRE(two.size() == 1);
    CHECK(two[0].shapes[0].radius == 0.0);
    CHECK(two[0].shapes[1].radius == 0.0);

    const auto cross = all_optimal_covers(kCross, 2, Metric::rectilinear, Criterion::minmax);
    CHECK(cross.size() == 2);

    const auto line = all_optimal_covers(kCollinear, 2, Metric::euclidean, Criterion::minsum);
    CHECK(line.size() == 2);
}
