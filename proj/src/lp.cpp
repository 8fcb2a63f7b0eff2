#include "extdiff/lp.hpp"

#include "extdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

namespace extdiff::lp {

LinearProgram LinearProgram::with_vars(std::size_t n) {
    LinearProgram lp;
    lp.num_vars = n;
    lp.objective.assign(n, 0.0);
    lp.bounds.assign(n, Bound{});
    return lp;
}

std::size_t LinearProgram::add_constraint(std::vector<Term> terms, Relation rel, double rhs) {
    constraints.push_back(Constraint{std::move(terms), rel, rhs});
    return constraints.size() - 1;
}

void validate(const LinearProgram& lp) {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::MalformedProgram, msg); };
    if (lp.num_vars == 0) fail("program has no variables");
    if (lp.objective.size() != lp.num_vars) fail("objective length differs from num_vars");
    if (lp.bounds.size() != lp.num_vars) fail("bounds length differs from num_vars");
    for (double c : lp.objective)
        if (!std::isfinite(c)) fail("non-finite objective coefficient");
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const Bound& b = lp.bounds[j];
        if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower == kInf || b.upper == -kInf)
            fail("invalid bound on variable " + std::to_string(j));
        if (b.lower > b.upper) fail("lower bound exceeds upper bound on variable " + std::to_string(j));
    }
    for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
        const Constraint& c = lp.constraints[r];
        if (!std::isfinite(c.rhs)) fail("non-finite rhs in row " + std::to_string(r));
        for (const Term& t : c.terms) {
            if (t.var >= lp.num_vars) fail("variable index out of range in row " + std::to_string(r));
            if (!std::isfinite(t.coef)) fail("non-finite coefficient in row " + std::to_string(r));
        }
    }
}

namespace {

// One primal inequality g . z >= h, which is one column of the dual program
//   maximize h . y  subject to  sum_k g_k y_k = c,  y >= 0.
struct DualColumn {
    std::vector<std::pair<std::uint32_t, double>> entries;  // (primal variable, g value)
    double h = 0.0;
    ConstraintRef ref;
    double sign = 1.0;  // multiplier of ref = sign * y
};

std::vector<DualColumn> build_columns(const LinearProgram& lp) {
    std::vector<DualColumn> cols;
    cols.reserve(lp.constraints.size() + 2 * lp.num_vars);
    auto push = [&](const std::vector<Term>& terms, double s, double rhs, ConstraintRef ref) {
        DualColumn col;
        col.h = s * rhs;
        col.ref = ref;
        col.sign = s;
        // Merge repeated variables so the dual column is a proper sparse vector.
        std::vector<std::pair<std::uint32_t, double>> e;
        e.reserve(terms.size());
        for (const Term& t : terms) e.emplace_back(static_cast<std::uint32_t>(t.var), s * t.coef);
        std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [v, c] : e) {
            if (!col.entries.empty() && col.entries.back().first == v)
                col.entries.back().second += c;
            else
                col.entries.emplace_back(v, c);
        }
        std::erase_if(col.entries, [](const auto& p) { return p.second == 0.0; });
        cols.push_back(std::move(col));
    };
    for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
        const Constraint& c = lp.constraints[r];
        const ConstraintRef ref{ConstraintRef::Kind::Row, r};
        switch (c.relation) {
            case Relation::GreaterEqual: push(c.terms, 1.0, c.rhs, ref); break;
            case Relation::LessEqual: push(c.terms, -1.0, c.rhs, ref); break;
            case Relation::Equal:
                push(c.terms, 1.0, c.rhs, ref);
                push(c.terms, -1.0, c.rhs, ref);
                break;
        }
    }
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const Bound& b = lp.bounds[j];
        const std::vector<Term> unit{Term{j, 1.0}};
        if (std::isfinite(b.lower)) push(unit, 1.0, b.lower, {ConstraintRef::Kind::Lower, j});
        if (std::isfinite(b.upper)) push(unit, -1.0, b.upper, {ConstraintRef::Kind::Upper, j});
    }
    return cols;
}

// Revised primal simplex on the dual (standard form, n equality rows) with an explicit
// dense basis inverse. Columns >= cols.size() are phase-one artificials, one per row.
class DualSimplex {
public:
    enum class Outcome { Optimal, Unbounded, Infeasible };

    DualSimplex(std::size_t n, const std::vector<DualColumn>& cols, std::span<const double> rhs)
        : n_(n), cols_(cols), sigma_(n, 1.0), b_(rhs.begin(), rhs.end()) {
        for (std::size_t r = 0; r < n_; ++r) {
            if (b_[r] < 0.0) {
                sigma_[r] = -1.0;
                b_[r] = -b_[r];
            }
        }
        basis_.resize(n_);
        in_basis_.assign(cols_.size() + n_, 0);
        for (std::size_t r = 0; r < n_; ++r) {
            basis_[r] = cols_.size() + r;
            in_basis_[basis_[r]] = 1;
        }
        binv_.assign(n_ * n_, 0.0);
        for (std::size_t r = 0; r < n_; ++r) binv_[r * n_ + r] = 1.0;
        xb_ = b_;
        pi_.assign(n_, 0.0);
        w_.assign(n_, 0.0);
    }

    Outcome run() {
        // Phase one: minimise the sum of artificials.
        phase_ = 1;
        if (iterate() != Outcome::Optimal) return Outcome::Infeasible;  // cannot happen: bounded below
        double infeas = 0.0;
        double bscale = 1.0;
        for (double v : b_) bscale = std::max(bscale, std::abs(v));
        for (std::size_t r = 0; r < n_; ++r)
            if (is_artificial(basis_[r])) infeas += std::max(0.0, xb_[r]);
        if (infeas > 1e-9 * bscale) return Outcome::Infeasible;
        drive_out_artificials();
        phase_ = 2;
        return iterate();
    }

    std::size_t iterations() const { return iterations_; }
    const std::vector<std::size_t>& basis() const { return basis_; }
    const std::vector<double>& basic_values() const { return xb_; }
    bool is_artificial(std::size_t j) const { return j >= cols_.size(); }

    // Simplex multipliers of the final basis mapped back to the unflipped rows; these
    // are the primal variable values.
    std::vector<double> primal_values() {
        compute_pi();
        std::vector<double> z(n_);
        for (std::size_t r = 0; r < n_; ++r) z[r] = sigma_[r] * pi_[r];
        return z;
    }

private:
    static constexpr double kPivTol = 1e-9;
    static constexpr std::size_t kRefactorPeriod = 100;
    static constexpr std::size_t kDegenerateSwitch = 50;

    double cost(std::size_t j) const {
        if (phase_ == 1) return is_artificial(j) ? -1.0 : 0.0;
        return is_artificial(j) ? 0.0 : cols_[j].h;
    }

    void compute_pi() {
        std::fill(pi_.begin(), pi_.end(), 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double c = cost(basis_[i]);
            if (c == 0.0) continue;
            const double* row = &binv_[i * n_];
            for (std::size_t r = 0; r < n_; ++r) pi_[r] += c * row[r];
        }
    }

    double reduced_cost(std::size_t j) const {
        double d = cost(j);
        if (is_artificial(j)) return d - pi_[j - cols_.size()];
        for (const auto& [r, v] : cols_[j].entries) d -= pi_[r] * sigma_[r] * v;
        return d;
    }

    void ftran(std::size_t j) {
        std::fill(w_.begin(), w_.end(), 0.0);
        if (is_artificial(j)) {
            const std::size_t r = j - cols_.size();
            for (std::size_t i = 0; i < n_; ++i) w_[i] = binv_[i * n_ + r];
            return;
        }
        for (const auto& [r, v] : cols_[j].entries) {
            const double sv = sigma_[r] * v;
            for (std::size_t i = 0; i < n_; ++i) w_[i] += binv_[i * n_ + r] * sv;
        }
    }

    void pivot(std::size_t leave_row, std::size_t enter) {
        const double wr = w_[leave_row];
        double* prow = &binv_[leave_row * n_];
        for (std::size_t c = 0; c < n_; ++c) prow[c] /= wr;
        const double t = xb_[leave_row] / wr;
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == leave_row) continue;
            const double wi = w_[i];
            if (wi == 0.0) continue;
            double* row = &binv_[i * n_];
            for (std::size_t c = 0; c < n_; ++c) row[c] -= wi * prow[c];
            xb_[i] -= wi * t;
        }
        xb_[leave_row] = t;
        in_basis_[basis_[leave_row]] = 0;
        basis_[leave_row] = enter;
        in_basis_[enter] = 1;
        ++iterations_;
        ++since_refactor_;
    }

    void refactor() {
        // Gauss-Jordan inversion of the basis matrix with partial pivoting.
        std::vector<double> m(n_ * n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = basis_[i];
            if (is_artificial(j)) {
                m[(j - cols_.size()) * n_ + i] = 1.0;
            } else {
                for (const auto& [r, v] : cols_[j].entries) m[r * n_ + i] = sigma_[r] * v;
            }
        }
        std::vector<double> inv(n_ * n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) inv[i * n_ + i] = 1.0;
        for (std::size_t c = 0; c < n_; ++c) {
            std::size_t p = c;
            for (std::size_t r = c + 1; r < n_; ++r)
                if (std::abs(m[r * n_ + c]) > std::abs(m[p * n_ + c])) p = r;
            if (std::abs(m[p * n_ + c]) < 1e-14)
                throw Error(ErrorKind::LpFailed, "singular basis during refactorization");
            if (p != c) {
                for (std::size_t k = 0; k < n_; ++k) {
                    std::swap(m[p * n_ + k], m[c * n_ + k]);
                    std::swap(inv[p * n_ + k], inv[c * n_ + k]);
                }
            }
            const double d = m[c * n_ + c];
            for (std::size_t k = 0; k < n_; ++k) {
                m[c * n_ + k] /= d;
                inv[c * n_ + k] /= d;
            }
            for (std::size_t r = 0; r < n_; ++r) {
                if (r == c) continue;
                const double f = m[r * n_ + c];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < n_; ++k) {
                    m[r * n_ + k] -= f * m[c * n_ + k];
                    inv[r * n_ + k] -= f * inv[c * n_ + k];
                }
            }
        }
        binv_ = std::move(inv);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            const double* row = &binv_[i * n_];
            for (std::size_t r = 0; r < n_; ++r) s += row[r] * b_[r];
            xb_[i] = s;
        }
        since_refactor_ = 0;
    }

    Outcome iterate() {
        const std::size_t limit = 200 * (n_ + cols_.size()) + 10000;
        std::size_t degenerate_run = 0;
        bool bland = false;
        for (;;) {
            if (iterations_ > limit) throw Error(ErrorKind::LpFailed, "simplex iteration limit reached");
            if (since_refactor_ >= kRefactorPeriod) refactor();
            compute_pi();

            std::size_t enter = SIZE_MAX;
            double best = kOptTol;
            for (std::size_t j = 0; j < cols_.size(); ++j) {
                if (in_basis_[j]) continue;
                const double d = reduced_cost(j);
                if (d > best) {
                    enter = j;
                    if (bland) break;
                    best = d;
                }
            }
            if (enter == SIZE_MAX) {
                if (since_refactor_ == 0) return Outcome::Optimal;
                refactor();  // confirm optimality on a fresh factorization
                continue;
            }

            ftran(enter);
            std::size_t leave = SIZE_MAX;
            double best_ratio = kInf;
            for (std::size_t i = 0; i < n_; ++i) {
                const double wi = w_[i];
                double ratio;
                if (phase_ == 2 && is_artificial(basis_[i])) {
                    if (std::abs(wi) <= kPivTol) continue;
                    ratio = 0.0;
                } else {
                    if (wi <= kPivTol) continue;
                    ratio = std::max(xb_[i], 0.0) / wi;
                }
                bool take = false;
                if (leave == SIZE_MAX || ratio < best_ratio - 1e-12) {
                    take = true;
                } else if (ratio <= best_ratio + 1e-12) {
                    take = bland ? basis_[i] < basis_[leave] : std::abs(wi) > std::abs(w_[leave]);
                }
                if (take) {
                    leave = i;
                    best_ratio = std::min(ratio, best_ratio);
                }
            }
            if (leave == SIZE_MAX) return Outcome::Unbounded;

            pivot(leave, enter);
            if (best_ratio <= 1e-12) {
                if (++degenerate_run >= kDegenerateSwitch) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
        }
    }

    void drive_out_artificials() {
        refactor();
        for (std::size_t i = 0; i < n_; ++i) {
            if (!is_artificial(basis_[i])) continue;
            const double* row = &binv_[i * n_];
            std::size_t enter = SIZE_MAX;
            double best = kPivTol;
            for (std::size_t j = 0; j < cols_.size(); ++j) {
                if (in_basis_[j]) continue;
                double v = 0.0;
                for (const auto& [r, val] : cols_[j].entries) v += row[r] * sigma_[r] * val;
                if (std::abs(v) > best * (1.0 + 1e-12)) {
                    best = std::abs(v);
                    enter = j;
                }
            }
            if (enter == SIZE_MAX) continue;  // redundant row: artificial stays at zero
            ftran(enter);
            pivot(i, enter);
        }
        refactor();
    }

    std::size_t n_;
    const std::vector<DualColumn>& cols_;
    std::vector<double> sigma_;
    std::vector<double> b_;
    std::vector<std::size_t> basis_;
    std::vector<char> in_basis_;
    std::vector<double> binv_;
    std::vector<double> xb_;
    std::vector<double> pi_;
    std::vector<double> w_;
    int phase_ = 1;
    std::size_t iterations_ = 0;
    std::size_t since_refactor_ = 0;
};

LpSolution solve_impl(const LinearProgram& lp, const std::vector<DualColumn>& cols) {
    DualSimplex simplex(lp.num_vars, cols, lp.objective);
    const auto outcome = simplex.run();
    LpSolution sol;
    sol.iterations = simplex.iterations();
    if (outcome == DualSimplex::Outcome::Unbounded) {
        sol.status = Status::Infeasible;
        return sol;
    }
    if (outcome == DualSimplex::Outcome::Infeasible) {
        // The dual is infeasible: the primal is unbounded when it is feasible at all.
        LinearProgram zero = lp;
        std::fill(zero.objective.begin(), zero.objective.end(), 0.0);
        DualSimplex probe(zero.num_vars, cols, zero.objective);
        const auto feas = probe.run();
        sol.status = feas == DualSimplex::Outcome::Optimal ? Status::Unbounded : Status::Infeasible;
        sol.iterations += probe.iterations();
        return sol;
    }

    sol.status = Status::Optimal;
    sol.values = simplex.primal_values();
    sol.objective_value = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) sol.objective_value += lp.objective[j] * sol.values[j];

    sol.row_duals.assign(lp.constraints.size(), 0.0);
    sol.bound_duals.assign(lp.num_vars, 0.0);
    const auto& basis = simplex.basis();
    const auto& xb = simplex.basic_values();
    bool dual_degenerate = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (simplex.is_artificial(basis[i])) {
            dual_degenerate = true;
            continue;
        }
        const DualColumn& col = cols[basis[i]];
        const double y = std::max(0.0, xb[i]);
        if (y <= 1e-9) dual_degenerate = true;
        if (col.ref.kind == ConstraintRef::Kind::Row)
            sol.row_duals[col.ref.index] += col.sign * y;
        else
            sol.bound_duals[col.ref.index] += col.sign * y;
        if (std::find(sol.basis.begin(), sol.basis.end(), col.ref) == sol.basis.end())
            sol.basis.push_back(col.ref);
    }

    // Primal degeneracy: more tight inequalities than variables.
    std::size_t tight = 0;
    for (const DualColumn& col : cols) {
        double g = -col.h;
        for (const auto& [r, v] : col.entries) g += v * sol.values[r];
        if (std::abs(g) <= 1e-9) ++tight;
    }
    sol.degenerate = dual_degenerate || tight > lp.num_vars;
    return sol;
}

}  // namespace

LpSolution solve(const LinearProgram& lp) {
    validate(lp);
    const auto cols = build_columns(lp);
    return solve_impl(lp, cols);
}

double max_violation(const LinearProgram& lp, std::span<const double> z) {
    if (z.size() != lp.num_vars) throw Error(ErrorKind::MalformedProgram, "point length differs from num_vars");
    double worst = 0.0;
    for (const Constraint& c : lp.constraints) {
        double lhs = 0.0;
        for (const Term& t : c.terms) lhs += t.coef * z[t.var];
        double v = 0.0;
        switch (c.relation) {
            case Relation::LessEqual: v = lhs - c.rhs; break;
            case Relation::GreaterEqual: v = c.rhs - lhs; break;
            case Relation::Equal: v = std::abs(lhs - c.rhs); break;
        }
        worst = std::max(worst, v);
    }
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        worst = std::max(worst, lp.bounds[j].lower - z[j]);
        worst = std::max(worst, z[j] - lp.bounds[j].upper);
    }
    return worst;
}

bool check_feasible(const LinearProgram& lp, std::span<const double> z, double tol) {
    validate(lp);
    return max_violation(lp, z) <= tol;
}

std::size_t matrix_rank(std::vector<std::vector<double>> rows, std::size_t cols, double tol) {
    for (auto& row : rows) {
        double s = 0.0;
        for (double v : row) s = std::max(s, std::abs(v));
        if (s > 0.0)
            for (double& v : row) v /= s;
    }
    std::size_t rank = 0;
    std::vector<char> used_col(cols, 0);
    std::vector<char> used_row(rows.size(), 0);
    for (;;) {
        std::size_t pr = SIZE_MAX, pc = SIZE_MAX;
        double best = tol;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (used_row[r]) continue;
            for (std::size_t c = 0; c < cols; ++c) {
                if (used_col[c]) continue;
                if (std::abs(rows[r][c]) > best) {
                    best = std::abs(rows[r][c]);
                    pr = r;
                    pc = c;
                }
            }
        }
        if (pr == SIZE_MAX) break;
        used_row[pr] = used_col[pc] = 1;
        ++rank;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (used_row[r]) continue;
            const double f = rows[r][pc] / rows[pr][pc];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols; ++c) rows[r][c] -= f * rows[pr][c];
        }
    }
    return rank;
}

bool uniqueness_probe(const LinearProgram& lp, const LpSolution& sol, double tol) {
    if (sol.status != Status::Optimal) return false;
    const std::size_t n = lp.num_vars;
    std::vector<std::vector<double>> rows;
    rows.push_back(lp.objective);
    for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
        const Constraint& c = lp.constraints[r];
        if (c.relation != Relation::Equal && std::abs(sol.row_duals[r]) <= tol) continue;
        std::vector<double> row(n, 0.0);
        for (const Term& t : c.terms) row[t.var] += t.coef;
        rows.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < n; ++j) {
        const Bound& b = lp.bounds[j];
        if (b.lower == b.upper || std::abs(sol.bound_duals[j]) > tol) {
            std::vector<double> row(n, 0.0);
            row[j] = 1.0;
            rows.push_back(std::move(row));
        }
    }
    return matrix_rank(std::move(rows), n, tol) == n;
}

void write_lp_text(const LinearProgram& lp, std::ostream& out) {
    auto old_prec = out.precision(17);
    auto terms = [&](const std::vector<Term>& ts) {
        if (ts.empty()) out << " 0 z0";
        for (const Term& t : ts) out << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << " z" << t.var;
    };
    out << "Minimize\n obj:";
    std::vector<Term> obj;
    for (std::size_t j = 0; j < lp.num_vars; ++j)
        if (lp.objective[j] != 0.0) obj.push_back({j, lp.objective[j]});
    terms(obj);
    out << "\nSubject To\n";
    for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
        const Constraint& c = lp.constraints[r];
        out << " c" << r << ":";
        terms(c.terms);
        out << (c.relation == Relation::LessEqual ? " <= " : c.relation == Relation::Equal ? " = " : " >= ")
            << c.rhs << "\n";
    }
    out << "Bounds\n";
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const Bound& b = lp.bounds[j];
        if (!std::isfinite(b.lower) && !std::isfinite(b.upper)) {
            out << " z" << j << " free\n";
            continue;
        }
        out << " ";
        if (std::isfinite(b.lower)) out << b.lower << " <= ";
        else out << "-inf <= ";
        out << "z" << j;
        if (std::isfinite(b.upper)) out << " <= " << b.upper;
        out << "\n";
    }
    out << "End\n";
    out.precision(old_prec);
}

}  // namespace extdiff::lp
