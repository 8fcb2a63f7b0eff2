#include "oracles.hpp"

#include "extdiff/difference.hpp"
#include "extdiff/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace extdiff;

namespace {

ConvexPolygon unit_square() { return canonicalize({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

SupportVector constant_values(const NetPtr& net, double r) { return {net, std::vector<double>(net->m(), r)}; }

}  // namespace

TEST_CASE("assembly counts at m = 8") {
    DifferenceOptions o;
    o.m = 8;
    const NetPtr net = build_net(8);
    for (Subadditivity s : {Subadditivity::Barycentric, Subadditivity::Scaled, Subadditivity::Unit}) {
        o.subadditivity = s;
        const auto p = assemble_lp(unit_square(), segment({0, 0}, {1, 0}), net, o);
        CHECK(p.stats.band_rows == 16);
        CHECK(p.stats.pairs == 28);
        CHECK(p.stats.antipodal_skipped == 4);
        CHECK(p.stats.subadditivity_rows + p.stats.trivial_dropped + p.stats.duplicates_removed == 24);
        CHECK(p.program.constraints.size() == 16 + p.stats.subadditivity_rows);
        CHECK(p.program.num_vars == 9);
        CHECK(p.epsilon_index() == 8);
        CHECK(p.program.bounds[8].lower == 0.0);
        CHECK(p.program.objective[8] == 1.0);
    }
    o.strict_nonneg = true;
    const auto q = assemble_lp(unit_square(), unit_square(), net, o);
    for (std::size_t i = 0; i < 8; ++i) CHECK(q.program.bounds[i].lower == 0.0);
}

TEST_CASE("genuine support vectors satisfy barycentric rows and can violate scaled rows") {
    std::mt19937_64 rng(4);
    const NetPtr net = build_net(12);
    DifferenceOptions bary, scaled;
    bary.m = scaled.m = 12;
    scaled.subadditivity = Subadditivity::Scaled;
    bool scaled_violated = false;
    for (int t = 0; t < 200; ++t) {
        const ConvexPolygon p = oracle::random_polygon(rng);
        const SupportVector h = sample_support(p, net);
        std::vector<double> z = h.values;
        z.push_back(0.0);
        CHECK(lp::max_violation(assemble_lp(h, bary).program, z) <= 1e-9);
        if (lp::max_violation(assemble_lp(h, scaled).program, z) > 1e-6) scaled_violated = true;
    }
    CHECK(scaled_violated);
}

TEST_CASE("A = B gives zero") {
    const ConvexPolygon a = canonicalize({{0, 0}, {4, 0}, {6, 2}, {3, 4}, {1, 2}});
    DifferenceOptions o;
    o.m = 32;
    const auto p = assemble_lp(a, a, build_net(32), o);
    for (double f : p.f.values) CHECK(f == 0.0);
    std::vector<double> zero(33, 0.0);
    CHECK(lp::check_feasible(p.program, zero));
    const auto s = extended_difference(a, a, o);
    CHECK(s.epsilon == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hausdorff(s.X, ConvexPolygon{}) <= 1e-9);
}

TEST_CASE("constant witness") {
    std::mt19937_64 rng(9);
    DifferenceOptions o;
    o.m = 32;
    const NetPtr net = build_net(32);
    for (int t = 0; t < 50; ++t) {
        const auto p = assemble_lp(oracle::random_polygon(rng), oracle::random_polygon(rng), net, o);
        const auto w = constant_witness(p);
        CHECK(lp::check_feasible(p.program, w));
        double fmax = -1e300;
        for (double f : p.f.values) fmax = std::max(fmax, f);
        if (fmax >= 0.0) CHECK(constant_witness(p, false) == w);
    }
    // All f negative: the unfloored constant breaks the sublinearity rows.
    const auto neg = assemble_lp(SupportVector{net, std::vector<double>(32, -1.0)}, o);
    CHECK_FALSE(lp::check_feasible(neg.program, constant_witness(neg, false)));
    const auto w = constant_witness(neg);
    CHECK(lp::check_feasible(neg.program, w));
    CHECK(w[0] == 0.0);
    CHECK(w[32] == doctest::Approx(1.0));
}

TEST_CASE("reconstruction of a constant support vector is the circumscribed regular polygon") {
    for (std::size_t m : {8u, 32u, 128u}) {
        const NetPtr net = build_net(m);
        const double r = 1.7;
        const ConvexPolygon p = reconstruct(constant_values(net, r), Reconstruction::Halfplane);
        REQUIRE(p.size() == m);
        for (const Point2& v : p.vertices()) CHECK(norm(v) == doctest::Approx(r / std::cos(std::numbers::pi / m)).epsilon(1e-12));
        const ConvexPolygon q = reconstruct(constant_values(net, r), Reconstruction::RadialHull);
        REQUIRE(q.size() == m);
        for (const Point2& v : q.vertices()) CHECK(norm(v) == doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("reconstruction of a point support") {
    const NetPtr net = build_net(64);
    const Point2 v{1.25, -0.5};
    SupportVector x{net, {}};
    for (const Point2& u : net->directions()) x.values.push_back(dot(u, v));
    CHECK(hausdorff(reconstruct(x, Reconstruction::Halfplane), point_set(v)) <= 1e-9);
    // Radial points (u . v) u lie on the circle with diameter [0, v], not at v.
    const ConvexPolygon radial = reconstruct(x, Reconstruction::RadialHull);
    for (const Point2& p : radial.vertices()) CHECK(norm(p - 0.5 * v) == doctest::Approx(0.5 * norm(v)).epsilon(1e-12));
    SupportVector origin{net, std::vector<double>(64, 0.0)};
    CHECK(reconstruct(origin, Reconstruction::RadialHull) == ConvexPolygon{});
}

TEST_CASE("reconstruction of a sampled polygon recovers it when the net contains its normals") {
    const NetPtr net = build_net(64);
    const ConvexPolygon sq = canonicalize({{-1, 0}, {2, 0}, {2, 3}, {-1, 3}});
    const ConvexPolygon p = reconstruct(sample_support(sq, net), Reconstruction::Halfplane);
    CHECK(hausdorff(p, sq) <= 1e-12);
    CHECK(p.size() == 4);
}

TEST_CASE("empty halfplane system") {
    const NetPtr net = build_net(8);
    CHECK_THROWS_AS(reconstruct(constant_values(net, -1.0), Reconstruction::Halfplane), Error);
    try {
        reconstruct(constant_values(net, -1.0), Reconstruction::Halfplane);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptySet);
    }
}

TEST_CASE("interval closed form") {
    CHECK(interval_difference({0, 1}, {2, 4}) == Interval1{-2.5, -2.5});
    CHECK(interval_difference({0, 4}, {1, 2}) == Interval1{-1, 2});
    CHECK(interval_difference({1, 3}, {1, 3}) == Interval1{0, 0});
}

TEST_CASE("interval closed form agrees with grid search on dyadic data") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> q(-16, 16);
    for (int t = 0; t < 30; ++t) {
        double a1 = q(rng) / 4.0, a2 = q(rng) / 4.0, b1 = q(rng) / 4.0, b2 = q(rng) / 4.0;
        if (a1 > a2) std::swap(a1, a2);
        if (b1 > b2) std::swap(b1, b2);
        const Interval1 x = interval_difference({a1, a2}, {b1, b2});
        const double dx = std::max(std::abs(a1 - b1 - x.lo), std::abs(a2 - b2 - x.hi));
        const auto g = oracle::interval_grid_search(a1, a2, b1, b2, 0.125, 10.0);
        CHECK(dx == g.delta);
    }
}

TEST_CASE("ball closed form") {
    const Ball2 a = ball_difference({{0, 0}, 1.2}, {{0, 0}, 0.5});
    CHECK(a.radius == doctest::Approx(0.7));
    CHECK(a.center == Point2{0, 0});
    const Ball2 b = ball_difference({{1, 0}, 0.5}, {{0, 0}, 1.2});
    CHECK(b.radius == 0.0);
    CHECK(b.center == Point2{1, 0});
    CHECK(ball_difference({{1, 1}, 1}, {{0, 2}, 1}).radius == 0.0);
}

TEST_CASE("ball sign matches the translation search") {
    const ConvexPolygon b1 = regular_polygon({1, 0}, 0.5, 64), b2 = regular_polygon({0, 0}, 1.2, 64);
    const Point2 t = oracle::best_translation(b1, b2, {0, 0}, 3.0);
    CHECK(norm(t - ball_difference({{1, 0}, 0.5}, {{0, 0}, 1.2}).center) <= 1e-3);
}

TEST_CASE("cross-segment instance") {
    const ConvexPolygon a = segment({-0.5, 0}, {0.5, 0}), b = segment({0, -1}, {0, 1});
    for (std::size_t m : {8u, 64u, 128u}) {
        DifferenceOptions o;
        o.m = m;
        const auto s = extended_difference(a, b, o);
        CHECK(s.epsilon == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(s.achieved_hausdorff >= 1.0 - 1e-9);
        CHECK(s.achieved_hausdorff <= s.epsilon + s.diagnostics.drift_constant * s.x_values.net->fill_distance() + 1e-9);
    }
}

TEST_CASE("collinear segments") {
    const auto s = extended_difference(segment({0, 0}, {1, 0}), segment({2, 0}, {4, 0}));
    CHECK(s.epsilon == doctest::Approx(0.5).epsilon(1e-9));
    // X may extend vertically inside the band; its horizontal position is pinned.
    double lo = 1e300, hi = -1e300;
    for (const Point2& v : s.X.vertices()) {
        lo = std::min(lo, v.x);
        hi = std::max(hi, v.x);
    }
    CHECK(lo == doctest::Approx(-2.5).epsilon(1e-6));
    CHECK(hi == doctest::Approx(-2.5).epsilon(1e-6));
    CHECK(s.achieved_hausdorff >= 0.5 - 1e-9);
    CHECK(s.achieved_hausdorff <= s.epsilon + s.diagnostics.drift_constant * s.x_values.net->fill_distance());
}

TEST_CASE("sum cancellation") {
    const ConvexPolygon b = canonicalize({{0, 0}, {2, 0}, {1, 1.5}});
    const ConvexPolygon a = minkowski_sum(b, unit_square());
    DifferenceOptions o;
    o.m = 128;
    const auto s = extended_difference(a, b, o);
    CHECK(s.epsilon <= 1e-9);
    CHECK(hausdorff(s.X, unit_square()) <= 2 * s.x_values.net->fill_distance() * 2.0);
}

TEST_CASE("diagnostics") {
    std::mt19937_64 rng(77);
    DifferenceOptions o;
    o.m = 64;
    for (int t = 0; t < 20; ++t) {
        const ConvexPolygon a = oracle::random_polygon(rng), b = oracle::random_polygon(rng, 2.0);
        const auto s = extended_difference(a, b, o);
        CHECK(s.epsilon >= 0.0);
        CHECK(s.B_plus_X == minkowski_sum(b, s.X));
        CHECK(s.achieved_hausdorff == doctest::Approx(hausdorff(a, s.B_plus_X)));
        CHECK(s.diagnostics.radius_bounds_hold);
        CHECK(s.diagnostics.r_in_bounds.lo <= s.diagnostics.r_in_bounds.hi);
        CHECK(s.diagnostics.R_out_bounds.lo <= s.diagnostics.R_out_bounds.hi);
        CHECK(s.achieved_hausdorff <= s.epsilon + s.diagnostics.drift_constant * s.x_values.net->fill_distance() + 1e-9);
        CHECK(s.diagnostics.assembly.band_rows == 128);
    }
}

TEST_CASE("scope check") {
    const ConvexPolygon one[] = {segment({-1, 0}, {1, 0})};
    const auto empty = scope_check(std::span<const ConvexPolygon>(one), 1.0);
    CHECK(empty.pairs.empty());
    CHECK(empty.all_ok);

    const ConvexPolygon two[] = {point_set({0, 0}), segment({-1, 0}, {1, 0})};
    const auto r = scope_check(std::span<const ConvexPolygon>(two), 1.0);
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].distance == doctest::Approx(1.0));
    CHECK(r.bound == doctest::Approx(2.0 + 1e-6));
    CHECK(r.all_ok);

    const auto tight = scope_check(std::span<const ConvexPolygon>(two), 0.4);
    CHECK_FALSE(tight.all_ok);
    CHECK(tight.worst_excess == doctest::Approx(0.2 - 1e-6));
}
