#include "oracles.hpp"

#include "extdiff/error.hpp"
#include "extdiff/lp.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace extdiff;
using namespace extdiff::lp;

namespace {

// min eps s.t. |x - 3| <= eps, eps >= 0.
LinearProgram band_program() {
    auto p = LinearProgram::with_vars(2);
    p.objective = {0.0, 1.0};
    p.bounds[1].lower = 0.0;
    p.add_constraint({{0, 1.0}, {1, -1.0}}, Relation::LessEqual, 3.0);
    p.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::GreaterEqual, 3.0);
    return p;
}

LinearProgram random_program(std::mt19937_64& rng, std::size_t n, std::size_t rows) {
    std::uniform_real_distribution<double> c(-1, 1);
    auto p = LinearProgram::with_vars(n);
    for (auto& o : p.objective) o = c(rng);
    for (std::size_t j = 0; j < n; ++j) p.bounds[j] = {-5.0, 5.0};
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<Term> t;
        for (std::size_t j = 0; j < n; ++j) t.push_back({j, c(rng)});
        p.add_constraint(std::move(t), r % 3 == 2 ? Relation::GreaterEqual : Relation::LessEqual, c(rng) + (r % 3 == 2 ? -1.0 : 1.0));
    }
    return p;
}

}  // namespace

TEST_CASE("band program") {
    const auto s = solve(band_program());
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.values[0] == doctest::Approx(3.0));
    CHECK(s.values[1] == doctest::Approx(0.0));
    CHECK(s.objective_value == doctest::Approx(0.0));
    CHECK(uniqueness_probe(band_program(), s));
}

TEST_CASE("box program") {
    auto p = LinearProgram::with_vars(1);
    p.objective = {-1.0};
    p.bounds[0] = {-kInf, 5.0};
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.values[0] == doctest::Approx(5.0));
    CHECK(s.objective_value == doctest::Approx(-5.0));
}

TEST_CASE("infeasible and unbounded statuses") {
    auto inf = LinearProgram::with_vars(1);
    inf.add_constraint({{0, 1.0}}, Relation::LessEqual, 0.0);
    inf.add_constraint({{0, 1.0}}, Relation::GreaterEqual, 1.0);
    CHECK(solve(inf).status == Status::Infeasible);

    auto unb = LinearProgram::with_vars(2);
    unb.objective = {-1.0, 0.0};
    unb.add_constraint({{0, 1.0}, {1, -1.0}}, Relation::LessEqual, 1.0);
    CHECK(solve(unb).status == Status::Unbounded);
}

TEST_CASE("equality rows") {
    auto p = LinearProgram::with_vars(2);
    p.objective = {1.0, 2.0};
    p.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::Equal, 4.0);
    p.bounds[0] = {0.0, 3.0};
    p.bounds[1].lower = 0.0;
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.values[0] == doctest::Approx(3.0));
    CHECK(s.values[1] == doctest::Approx(1.0));
    CHECK(s.objective_value == doctest::Approx(5.0));
}

TEST_CASE("malformed programs are rejected") {
    auto kind = [](const LinearProgram& p) {
        try {
            solve(p);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    auto p = LinearProgram::with_vars(2);
    p.add_constraint({{2, 1.0}}, Relation::LessEqual, 1.0);
    CHECK(kind(p) == ErrorKind::MalformedProgram);

    auto q = LinearProgram::with_vars(2);
    q.objective = {NAN, 0.0};
    CHECK(kind(q) == ErrorKind::MalformedProgram);

    auto r = LinearProgram::with_vars(2);
    r.objective.pop_back();
    CHECK(kind(r) == ErrorKind::MalformedProgram);

    auto s = LinearProgram::with_vars(1);
    s.add_constraint({{0, 1.0}}, Relation::LessEqual, INFINITY);
    CHECK(kind(s) == ErrorKind::MalformedProgram);

    auto b = LinearProgram::with_vars(1);
    b.bounds[0] = {2.0, 1.0};
    CHECK(kind(b) == ErrorKind::MalformedProgram);
}

TEST_CASE("optimum matches vertex enumeration on small random programs") {
    std::mt19937_64 rng(2024);
    int optimal = 0;
    for (int t = 0; t < 150; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
        const LinearProgram p = random_program(rng, n, 3 + static_cast<std::size_t>(t % 4));
        const auto s = solve(p);
        const auto ref = oracle::vertex_enumeration(p);
        if (!ref) {
            CHECK(s.status == Status::Infeasible);
            continue;
        }
        REQUIRE(s.status == Status::Optimal);
        ++optimal;
        CHECK(check_feasible(p, s.values));
        CHECK(s.objective_value == doctest::Approx(*ref).epsilon(1e-7));
    }
    CHECK(optimal > 100);
}

TEST_CASE("duals certify optimality") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
        const LinearProgram p = random_program(rng, 3, 5);
        const auto s = solve(p);
        if (s.status != Status::Optimal) continue;
        REQUIRE(s.row_duals.size() == p.constraints.size());
        REQUIRE(s.bound_duals.size() == p.num_vars);
        // Stationarity and the dual objective equal the primal objective.
        std::vector<double> grad(p.num_vars, 0.0);
        double dual_obj = 0.0;
        for (std::size_t r = 0; r < p.constraints.size(); ++r) {
            const double y = s.row_duals[r];
            const auto rel = p.constraints[r].relation;
            if (rel == Relation::LessEqual) CHECK(y <= 1e-9);
            if (rel == Relation::GreaterEqual) CHECK(y >= -1e-9);
            for (const Term& term : p.constraints[r].terms) grad[term.var] += y * term.coef;
            dual_obj += y * p.constraints[r].rhs;
        }
        for (std::size_t j = 0; j < p.num_vars; ++j) {
            const double z = s.bound_duals[j];
            grad[j] += z;
            if (z > 0) dual_obj += z * p.bounds[j].lower;
            if (z < 0) dual_obj += z * p.bounds[j].upper;
        }
        for (std::size_t j = 0; j < p.num_vars; ++j) CHECK(grad[j] == doctest::Approx(p.objective[j]).epsilon(1e-7));
        CHECK(dual_obj == doctest::Approx(s.objective_value).epsilon(1e-7));
    }
}

TEST_CASE("optimum moves continuously with the right-hand side") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 60; ++t) {
        LinearProgram p = random_program(rng, 3, 5);
        const auto s = solve(p);
        if (s.status != Status::Optimal) continue;
        const double h = 1e-6;
        for (auto& c : p.constraints) c.rhs += h;
        const auto s2 = solve(p);
        REQUIRE(s2.status == Status::Optimal);
        double lip = 0.0;
        for (double y : s.row_duals) lip += std::abs(y);
        for (double z : s.bound_duals) lip += std::abs(z);
        CHECK(std::abs(s2.objective_value - s.objective_value) <= lip * h + 1e-9);
    }
}

TEST_CASE("solve is deterministic") {
    std::mt19937_64 rng(1);
    const LinearProgram p = random_program(rng, 4, 8);
    const auto a = solve(p), b = solve(p);
    CHECK(a.values == b.values);
    CHECK(a.basis == b.basis);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("uniqueness probe") {
    // min eps with |x| <= eps and |y - x| <= 1 + eps: x is pinned, y is free on a segment.
    auto p = LinearProgram::with_vars(3);
    p.objective = {0.0, 0.0, 1.0};
    p.bounds[2].lower = 0.0;
    p.add_constraint({{0, 1.0}, {2, -1.0}}, Relation::LessEqual, 0.0);
    p.add_constraint({{0, 1.0}, {2, 1.0}}, Relation::GreaterEqual, 0.0);
    p.add_constraint({{1, 1.0}, {0, -1.0}, {2, -1.0}}, Relation::LessEqual, 1.0);
    p.add_constraint({{1, 1.0}, {0, -1.0}, {2, 1.0}}, Relation::GreaterEqual, -1.0);
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective_value == doctest::Approx(0.0));
    CHECK_FALSE(uniqueness_probe(p, s));

    auto q = LinearProgram::with_vars(2);
    q.objective = {1.0, 1.0};
    q.add_constraint({{0, 1.0}}, Relation::GreaterEqual, 1.0);
    q.add_constraint({{1, 1.0}}, Relation::GreaterEqual, 2.0);
    CHECK(uniqueness_probe(q, solve(q)));
}

TEST_CASE("feasibility helpers and text dump") {
    const auto p = band_program();
    const std::vector<double> good{3.0, 0.5}, bad{3.0, -0.5};
    CHECK(check_feasible(p, good));
    CHECK_FALSE(check_feasible(p, bad));
    CHECK(max_violation(p, good) == 0.0);
    CHECK(max_violation(p, bad) == doctest::Approx(0.5));
    std::ostringstream os;
    write_lp_text(p, os);
    CHECK(os.str().find("Minimize") != std::string::npos);
    CHECK(matrix_rank({{1, 2}, {2, 4}}, 2, 1e-12) == 1);
    CHECK(matrix_rank({{1, 0}, {0, 1}, {1, 1}}, 2, 1e-12) == 2);
}
