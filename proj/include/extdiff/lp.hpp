#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace extdiff::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFeasTol = 1e-8;
inline constexpr double kOptTol = 1e-9;

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Term {
    std::size_t var = 0;
    double coef = 0.0;
};

struct Constraint {
    std::vector<Term> terms;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

struct Bound {
    double lower = -kInf;
    double upper = kInf;
};

/// minimize objective . z subject to constraints and per-variable bounds.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<Constraint> constraints;
    std::vector<Bound> bounds;

    /// Program with n free variables and a zero objective.
    static LinearProgram with_vars(std::size_t n);
    std::size_t add_constraint(std::vector<Term> terms, Relation rel, double rhs);
};

enum class Status { Optimal, Infeasible, Unbounded };

/// Reference to one inequality of the program: a constraint row or a variable bound.
struct ConstraintRef {
    enum class Kind { Row, Lower, Upper };
    Kind kind = Kind::Row;
    std::size_t index = 0;

    friend bool operator==(const ConstraintRef&, const ConstraintRef&) = default;
};

struct LpSolution {
    Status status = Status::Infeasible;
    std::vector<double> values;
    double objective_value = 0.0;
    /// Constraints whose multipliers are basic at the final vertex; together they
    /// determine `values`.
    std::vector<ConstraintRef> basis;
    /// Lagrange multipliers: objective = sum row_duals * rows + sum bound_duals * bounds
    /// at the optimum. Nonnegative for >= rows and lower bounds, nonpositive for <= rows
    /// and upper bounds.
    std::vector<double> row_duals;
    std::vector<double> bound_duals;
    bool degenerate = false;
    std::size_t iterations = 0;
};

/// Throws Error{MalformedProgram} on out-of-range indices, non-finite data or
/// inconsistent sizes.
void validate(const LinearProgram& lp);

/// Two-phase simplex. Returns Infeasible or Unbounded through the status rather than
/// throwing. Deterministic for a fixed input.
LpSolution solve(const LinearProgram& lp);

bool check_feasible(const LinearProgram& lp, std::span<const double> z, double tol = kFeasTol);

/// Largest violation of any constraint or bound at z (0 when feasible).
double max_violation(const LinearProgram& lp, std::span<const double> z);

/// Rank evidence for a unique optimum: every optimal point satisfies the constraints
/// with nonzero multipliers at equality together with objective . z = optimum. When
/// that system has full column rank the optimum is unique.
bool uniqueness_probe(const LinearProgram& lp, const LpSolution& sol, double tol = 1e-8);

/// Numerical rank of a dense row-major matrix by Gaussian elimination with full pivoting.
std::size_t matrix_rank(std::vector<std::vector<double>> rows, std::size_t cols, double tol);

/// Plain-text dump in an LP-file-like layout, for debugging.
void write_lp_text(const LinearProgram& lp, std::ostream& out);

}  // namespace extdiff::lp
