#include "oracles.hpp"

#include "extdiff/error.hpp"
#include "extdiff/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace extdiff;

namespace {

ConvexPolygon square(double h) { return canonicalize({{-h, -h}, {h, -h}, {h, h}, {-h, h}}); }

ConvexPolygon pentagon() { return canonicalize({{0, 0}, {4, 0}, {6, 2}, {3, 4}, {1, 2}}); }

bool near(Point2 a, Point2 b, double tol = 1e-12) { return norm(a - b) <= tol; }

}  // namespace

TEST_CASE("canonicalize degenerate inputs") {
    const ConvexPolygon p = canonicalize({{0, 0}});
    CHECK(p.is_point());
    CHECK(p.vertices()[0] == Point2{0, 0});

    const ConvexPolygon s = canonicalize({{0, 0}, {1, 0}, {0.5, 0}});
    REQUIRE(s.is_segment());
    CHECK(s.vertices()[0] == Point2{0, 0});
    CHECK(s.vertices()[1] == Point2{1, 0});

    CHECK(canonicalize({{1, 1}, {1, 1}, {1, 1}}).is_point());
}

TEST_CASE("canonicalize drops the interior point of the pentagon input") {
    const ConvexPolygon p = canonicalize({{0, 0}, {4, 0}, {6, 2}, {3, 4}, {1, 2}, {3, 1}});
    const std::vector<Point2> expect{{0, 0}, {4, 0}, {6, 2}, {3, 4}, {1, 2}};
    CHECK(p.vertices() == expect);
    CHECK(oracle::same_vertex_set(p.vertices(), oracle::gift_wrap({{0, 0}, {4, 0}, {6, 2}, {3, 4}, {1, 2}, {3, 1}})));
}

TEST_CASE("canonicalize errors") {
    CHECK_THROWS_AS(canonicalize(std::span<const Point2>{}), Error);
    try {
        canonicalize({{0, 0}, {NAN, 1}});
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonFinite);
    }
    try {
        canonicalize({{0, 0}, {INFINITY, 1}});
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonFinite);
    }
}

TEST_CASE("canonical form: ccw, lexicographic start, idempotent, matches gift wrapping") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> c(-5, 5);
    for (int t = 0; t < 200; ++t) {
        std::vector<Point2> pts(3 + static_cast<std::size_t>(t % 20));
        for (auto& p : pts) p = {c(rng), c(rng)};
        const ConvexPolygon h = canonicalize(pts);
        CHECK(canonicalize(h.vertices()) == h);
        CHECK(oracle::same_vertex_set(h.vertices(), oracle::gift_wrap(pts)));
        const auto& v = h.vertices();
        for (std::size_t i = 1; i < v.size(); ++i) CHECK((v[0].x < v[i].x || (v[0].x == v[i].x && v[0].y < v[i].y)));
        for (std::size_t i = 0; i < v.size() && v.size() >= 3; ++i)
            CHECK(cross(v[(i + 1) % v.size()] - v[i], v[(i + 2) % v.size()] - v[(i + 1) % v.size()]) > 0.0);
    }
}

TEST_CASE("support values") {
    CHECK(support(square(0.5), {1, 0}) == doctest::Approx(0.5));
    CHECK(support(canonicalize({{2, 3}}), {0, 1}) == doctest::Approx(3.0));
    CHECK(support(pentagon(), {1, 0}) == doctest::Approx(6.0));
    try {
        support(square(1), {1, 1});
        FAIL("expected NonUnit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonUnit);
    }
}

TEST_CASE("minkowski sums") {
    const double t = 0.7;
    const ConvexPolygon r = minkowski_sum(segment({-t, 0}, {t, 0}), segment({0, -1}, {0, 1}));
    CHECK(r == canonicalize({{-t, -1}, {t, -1}, {t, 1}, {-t, 1}}));
    CHECK(minkowski_sum(pentagon(), ConvexPolygon{}) == pentagon());
    CHECK(minkowski_sum(segment({0, 0}, {1, 0}), segment({0, 0}, {0, 1})) == canonicalize({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
}

TEST_CASE("minkowski sum agrees with the hull of pairwise sums") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        const ConvexPolygon p = oracle::random_polygon(rng), q = oracle::random_polygon(rng);
        std::vector<Point2> sums;
        for (const Point2& a : p.vertices())
            for (const Point2& b : q.vertices()) sums.push_back(a + b);
        CHECK(oracle::same_vertex_set(minkowski_sum(p, q).vertices(), oracle::gift_wrap(sums), 1e-9));
    }
}

TEST_CASE("hausdorff examples") {
    CHECK(hausdorff(segment({-0.5, 0}, {0.5, 0}), segment({0, -1}, {0, 1})) == doctest::Approx(1.0));
    CHECK(hausdorff(pentagon(), pentagon()) == 0.0);
    const ConvexPolygon unit = canonicalize({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(hausdorff(unit, translate(unit, {0.3, 0})) == doctest::Approx(0.3));
}

TEST_CASE("hausdorff matches dense boundary sampling") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 40; ++t) {
        const ConvexPolygon p = oracle::random_polygon(rng), q = oracle::random_polygon(rng);
        const double exact = hausdorff(p, q);
        const double sampled = oracle::sampled_hausdorff(p, q);
        CHECK(sampled <= exact + 1e-12);
        CHECK(exact - sampled <= 0.05);
    }
}

TEST_CASE("radii") {
    const auto seg = segment({-1, 0}, {1, 0});
    CHECK(inscribed_radius(seg).radius == 0.0);
    const auto sr = inscribed_radius(square(0.5));
    CHECK(sr.radius == doctest::Approx(0.5));
    CHECK(near(sr.center, {0, 0}, 1e-9));
    CHECK(inscribed_radius(ConvexPolygon{}).radius == 0.0);

    const auto cs = circumscribed_radius(seg);
    CHECK(cs.radius == doctest::Approx(1.0));
    CHECK(near(cs.center, {0, 0}, 1e-12));
    CHECK(circumscribed_radius(square(0.5)).radius == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(circumscribed_radius(ConvexPolygon{}).radius == 0.0);
}

TEST_CASE("circumscribed circle encloses every vertex and touches one") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        const ConvexPolygon p = oracle::random_polygon(rng);
        const auto c = circumscribed_radius(p);
        double far = 0.0;
        for (const Point2& v : p.vertices()) far = std::max(far, norm(v - c.center));
        CHECK(far <= c.radius + 1e-9);
        CHECK(far >= c.radius - 1e-9);
        // No smaller circle centred nearby does better.
        for (const Point2 d : {Point2{1e-4, 0}, Point2{-1e-4, 0}, Point2{0, 1e-4}, Point2{0, -1e-4}}) {
            double f2 = 0.0;
            for (const Point2& v : p.vertices()) f2 = std::max(f2, norm(v - (c.center + d)));
            CHECK(f2 >= c.radius - 1e-9);
        }
    }
}

TEST_CASE("inscribed circle fits and is maximal against a grid search") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 20; ++t) {
        const ConvexPolygon p = oracle::random_polygon(rng);
        if (p.size() < 3) continue;
        const auto r = inscribed_radius(p);
        auto clearance = [&](Point2 z) {
            const auto& v = p.vertices();
            double c = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < v.size(); ++i) {
                const Point2 e = v[(i + 1) % v.size()] - v[i];
                c = std::min(c, cross(e, z - v[i]) / norm(e));
            }
            return c;
        };
        CHECK(clearance(r.center) >= r.radius - 1e-9);
        double grid_best = 0.0;
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; j <= 200; ++j) grid_best = std::max(grid_best, clearance({-5 + 0.05 * i, -5 + 0.05 * j}));
        CHECK(grid_best <= r.radius + 1e-9);
        CHECK(grid_best >= r.radius - 0.05);
    }
}

TEST_CASE("transforms") {
    const double h = std::sqrt(2.0) / 2;
    const ConvexPolygon d = transform(square(0.5), Mat2::rotation(std::numbers::pi / 4));
    CHECK(oracle::same_vertex_set(d.vertices(), {{h, 0}, {0, h}, {-h, 0}, {0, -h}}, 1e-12));
    CHECK(transform(pentagon(), Mat2::identity(), {1, 2}) == translate(pentagon(), {1, 2}));
    const Mat2 q = Mat2::rotation(std::numbers::pi / 2);
    CHECK(hausdorff(transform(transform(pentagon(), q), q), transform(pentagon(), Mat2::rotation(std::numbers::pi))) < 1e-12);
    try {
        transform(pentagon(), Mat2{2, 0, 0, 1});
        FAIL("expected NotOrthogonal");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotOrthogonal);
    }
}

TEST_CASE("scaling") {
    CHECK(scale(pentagon(), 1.0) == pentagon());
    CHECK(scale(pentagon(), 0.0) == ConvexPolygon{});
    CHECK(scale(canonicalize({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 2.0) == canonicalize({{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
    try {
        scale(pentagon(), -1.0);
        FAIL("expected NegativeScale");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NegativeScale);
    }
}

TEST_CASE("random properties: additivity, metric axioms, isometry, monotone radii, dilation") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), sh(-3, 3), dd(0.1, 2.0);
    const NetPtr net = build_net(360);
    const NetPtr fine = build_net(4096);
    for (int t = 0; t < 60; ++t) {
        const ConvexPolygon p = oracle::random_polygon(rng), q = oracle::random_polygon(rng), r = oracle::random_polygon(rng);
        const ConvexPolygon pq = minkowski_sum(p, q);
        for (const Point2& u : net->directions()) CHECK(std::abs(support(pq, u) - support(p, u) - support(q, u)) <= 1e-9);

        double mx = 0.0;
        for (const Point2& u : fine->directions()) mx = std::max(mx, std::abs(support(p, u) - support(q, u)));
        const double hd = hausdorff(p, q);
        CHECK(std::abs(hd - mx) <= 1e-6 + (max_vertex_norm(p) + max_vertex_norm(q)) * fine->fill_distance());

        CHECK(std::abs(hausdorff(p, q) - hausdorff(q, p)) <= 1e-9);
        CHECK(hausdorff(p, r) <= hausdorff(p, q) + hausdorff(q, r) + 1e-9);

        Mat2 m = Mat2::rotation(ang(rng));
        if (t % 2) m = m * Mat2::reflection_x();
        const Point2 s{sh(rng), sh(rng)};
        CHECK(std::abs(hausdorff(transform(p, m, s), transform(q, m, s)) - hd) <= 1e-9);

        std::vector<Point2> both = p.vertices();
        both.insert(both.end(), q.vertices().begin(), q.vertices().end());
        const ConvexPolygon big = canonicalize(both);
        CHECK(inscribed_radius(p).radius <= inscribed_radius(big).radius + 1e-9);
        CHECK(circumscribed_radius(p).radius <= circumscribed_radius(big).radius + 1e-9);

        const double delta = dd(rng);
        const ConvexPolygon ball = regular_polygon({0, 0}, delta, 64);
        const double grow = inscribed_radius(minkowski_sum(p, ball)).radius - inscribed_radius(p).radius;
        CHECK(grow >= delta * std::cos(std::numbers::pi / 64) - 1e-9);
        CHECK(grow <= delta + 1e-9);
    }
}
