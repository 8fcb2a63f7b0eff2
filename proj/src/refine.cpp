#include "extdiff/refine.hpp"

#include "extdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace extdiff {

void PenaltyFunctional::validate(std::size_t m) const {
    if (kind == Kind::L2Anchor && !anchor) throw Error(ErrorKind::InvalidArgument, "anchor penalty without an anchor");
    if (anchor && anchor->values.size() != m) throw Error(ErrorKind::InvalidArgument, "anchor length does not match m");
    if (!weights.empty() && weights.size() != m) throw Error(ErrorKind::InvalidArgument, "weight count does not match m");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "weights must be positive");
}

std::vector<double> PenaltyFunctional::resolved_weights(std::size_t m) const {
    if (!weights.empty()) return weights;
    return std::vector<double>(m, 2.0 * std::numbers::pi / static_cast<double>(m));
}

double PenaltyFunctional::value(std::span<const double> x) const {
    const auto w = resolved_weights(x.size());
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - anchor_at(i);
        q += w[i] * d * d;
    }
    return q;
}

namespace {

using Vec = std::vector<double>;

double dotv(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Solves the dense system in place by Gaussian elimination with partial pivoting.
bool solve_dense(std::vector<Vec> mat, Vec rhs, Vec& out) {
    const std::size_t n = rhs.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(mat[r][c]) > std::abs(mat[piv][c])) piv = r;
        if (std::abs(mat[piv][c]) < 1e-300) return false;
        std::swap(mat[piv], mat[c]);
        std::swap(rhs[piv], rhs[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = mat[r][c] / mat[c][c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) mat[r][k] -= f * mat[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = rhs[r];
        for (std::size_t k = r + 1; k < n; ++k) s -= mat[r][k] * out[k];
        out[r] = s / mat[r][r];
    }
    return true;
}

// Stage-one program plus an upper bound on epsilon, used as a linear-minimization oracle.
struct Oracle {
    lp::LinearProgram program;
    std::size_t m = 0;

    Vec vertex(const Vec& x_cost, double eps_cost) {
        for (std::size_t i = 0; i < m; ++i) program.objective[i] = x_cost[i];
        program.objective[m] = eps_cost;
        const lp::LpSolution s = lp::solve(program);
        if (s.status != lp::Status::Optimal) throw Error(ErrorKind::LpFailed, "linear-minimization oracle failed");
        return s.values;
    }
};

struct Stage {
    AssembledProgram assembled;
    DifferenceSolution base;
};

Stage stage_one(const ConvexPolygon& a, const ConvexPolygon& b, const DifferenceOptions& opts) {
    Stage st{assemble_lp(a, b, build_net(opts.m), opts), extended_difference(a, b, opts)};
    return st;
}

DifferenceSolution make_solution(const ConvexPolygon& a, const ConvexPolygon& b, const Stage& st, const Vec& z) {
    const std::size_t m = st.assembled.f.size();
    DifferenceSolution sol;
    sol.options = st.base.options;
    sol.f_values = st.assembled.f;
    sol.x_values = SupportVector{st.assembled.f.net, Vec(z.begin(), z.begin() + static_cast<long>(m))};
    double resid = 0.0;
    for (std::size_t i = 0; i < m; ++i) resid = std::max(resid, std::abs(sol.x_values.values[i] - sol.f_values.values[i]));
    sol.epsilon = resid;
    sol.diagnostics.assembly = st.assembled.stats;
    finish_solution(a, b, sol);
    return sol;
}

// Wolfe's minimum-norm-point method on y = sqrt(w) (x - anchor) over the oracle's polytope.
struct MinNormResult {
    Vec z;
    bool converged = false;
    std::size_t iterations = 0;
    double gap = 0.0;
};

MinNormResult min_norm_point(Oracle& oracle, const Vec& start, const Vec& sw, const Vec& anchor) {
    const std::size_t m = oracle.m;
    auto to_y = [&](const Vec& z) {
        Vec y(m);
        for (std::size_t i = 0; i < m; ++i) y[i] = sw[i] * (z[i] - anchor[i]);
        return y;
    };
    std::vector<Vec> zs{start};
    std::vector<Vec> ys{to_y(start)};
    Vec lambda{1.0};
    Vec y = ys[0];

    auto combine = [&](const Vec& weights) {
        Vec out(m, 0.0);
        for (std::size_t s = 0; s < ys.size(); ++s)
            for (std::size_t i = 0; i < m; ++i) out[i] += weights[s] * ys[s][i];
        return out;
    };
    auto drop = [&](std::size_t s) {
        zs.erase(zs.begin() + static_cast<long>(s));
        ys.erase(ys.begin() + static_cast<long>(s));
        lambda.erase(lambda.begin() + static_cast<long>(s));
    };

    MinNormResult res;
    for (std::size_t it = 0; it < kMaxRefineIterations; ++it) {
        res.iterations = it + 1;
        Vec cost(m);
        for (std::size_t i = 0; i < m; ++i) cost[i] = 2.0 * sw[i] * y[i];
        const Vec zq = oracle.vertex(cost, 0.0);
        const Vec yq = to_y(zq);
        double gap = 0.0;
        for (std::size_t i = 0; i < m; ++i) gap += 2.0 * y[i] * (y[i] - yq[i]);
        res.gap = gap;
        if (gap <= kGapTol) {
            res.converged = true;
            break;
        }
        bool known = false;
        for (const Vec& p : ys) {
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::abs(p[i] - yq[i]));
            if (d <= 1e-12) known = true;
        }
        if (known) break;
        zs.push_back(zq);
        ys.push_back(yq);
        lambda.push_back(0.0);

        for (;;) {
            // Affine minimizer of the corral: [G 1; 1' 0] [alpha; nu] = [0; 1].
            const std::size_t k = ys.size();
            std::vector<Vec> mat(k + 1, Vec(k + 1, 0.0));
            double trace = 0.0;
            for (std::size_t r = 0; r < k; ++r) {
                for (std::size_t c = r; c < k; ++c) mat[r][c] = mat[c][r] = dotv(ys[r], ys[c]);
                trace += mat[r][r];
                mat[r][k] = mat[k][r] = 1.0;
            }
            for (std::size_t r = 0; r < k; ++r) mat[r][r] += 1e-14 * (trace + 1.0);
            Vec rhs(k + 1, 0.0);
            rhs[k] = 1.0;
            Vec sol;
            if (!solve_dense(mat, rhs, sol)) {
                drop(k - 1);
                break;
            }
            Vec alpha(sol.begin(), sol.begin() + static_cast<long>(k));
            const double pos_tol = 1e-12;
            if (std::all_of(alpha.begin(), alpha.end(), [&](double v) { return v > pos_tol; })) {
                lambda = alpha;
                break;
            }
            double theta = 1.0;
            for (std::size_t s = 0; s < k; ++s)
                if (alpha[s] <= pos_tol && lambda[s] - alpha[s] > 0.0) theta = std::min(theta, lambda[s] / (lambda[s] - alpha[s]));
            for (std::size_t s = 0; s < k; ++s) lambda[s] = (1.0 - theta) * lambda[s] + theta * alpha[s];
            bool removed = false;
            for (std::size_t s = k; s-- > 0;) {
                if (lambda[s] <= 1e-14) {
                    drop(s);
                    removed = true;
                }
            }
            if (!removed) {
                // Rounding kept every weight positive; drop the smallest to guarantee progress.
                drop(static_cast<std::size_t>(std::min_element(lambda.begin(), lambda.end()) - lambda.begin()));
            }
            double total = 0.0;
            for (double l : lambda) total += l;
            for (double& l : lambda) l /= total;
            if (ys.size() == 1) break;
        }
        y = combine(lambda);
    }
    res.z.assign(m + 1, 0.0);
    for (std::size_t s = 0; s < zs.size(); ++s)
        for (std::size_t i = 0; i <= m; ++i) res.z[i] += lambda[s] * zs[s][i];
    return res;
}

Vec anchor_values(const PenaltyFunctional& p, std::size_t m) {
    Vec a(m);
    for (std::size_t i = 0; i < m; ++i) a[i] = p.anchor_at(i);
    return a;
}

Vec stage_one_vertex(const Stage& st) {
    Vec z = st.base.x_values.values;
    z.push_back(st.base.epsilon);
    return z;
}

std::vector<GammaResult> sweep(const ConvexPolygon& a, const ConvexPolygon& b, const Stage& st,
                               const PenaltyFunctional& penalty, std::span<const double> gammas) {
    const std::size_t m = st.assembled.f.size();
    for (std::size_t g = 0; g < gammas.size(); ++g) {
        if (!(gammas[g] > 0.0)) throw Error(ErrorKind::InvalidArgument, "gammas must be positive");
        if (g > 0 && !(gammas[g] < gammas[g - 1])) throw Error(ErrorKind::InvalidArgument, "gammas must be decreasing");
    }
    const Vec w = penalty.resolved_weights(m);
    const Vec anchor = anchor_values(penalty, m);
    double fmax = 0.0;
    for (double v : st.assembled.f.values) fmax = std::max(fmax, std::abs(v));
    const double q0 = penalty.value(Vec(m, 0.0));

    Vec sw(m);
    for (std::size_t i = 0; i < m; ++i) sw[i] = std::sqrt(w[i]);

    // min_x Q over the level {epsilon <= e}; nonincreasing and convex in e.
    Oracle oracle{st.assembled.program, m};
    auto level = [&](double e) {
        oracle.program.bounds[m].upper = e;
        return min_norm_point(oracle, stage_one_vertex(st), sw, anchor);
    };

    std::vector<GammaResult> out;
    for (double gamma : gammas) {
        // x = 0 with epsilon = max |f| is feasible, so the optimum has epsilon below this cap.
        double lo = st.base.epsilon, hi = std::max(lo, fmax + gamma * q0 + 1e-9);
        bool inner_ok = true;
        std::size_t iterations = 0;
        auto phi = [&](double e) {
            const MinNormResult r = level(e);
            inner_ok = inner_ok && r.converged;
            iterations += r.iterations;
            return e + gamma * penalty.value(Vec(r.z.begin(), r.z.begin() + static_cast<long>(m)));
        };
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
        double fc = phi(c), fd = phi(d);
        while (hi - lo > kGapTol * (1.0 + std::abs(hi))) {
            if (fc <= fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - invphi * (hi - lo);
                fc = phi(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + invphi * (hi - lo);
                fd = phi(d);
            }
        }
        double best = lo;
        double fbest = phi(lo);
        for (double e : {0.5 * (lo + hi), hi}) {
            const double fe = phi(e);
            if (fe < fbest) {
                fbest = fe;
                best = e;
            }
        }
        MinNormResult r = level(best);
        r.z[m] = best;
        GammaResult gr;
        gr.gamma = gamma;
        gr.solution = make_solution(a, b, st, r.z);
        gr.penalty = penalty.value(gr.solution.x_values.values);
        gr.converged = inner_ok && r.converged;
        gr.iterations = iterations + r.iterations;
        out.push_back(std::move(gr));
    }
    return out;
}

}  // namespace

RefinedSolution refine(const ConvexPolygon& a, const ConvexPolygon& b, const DifferenceOptions& opts,
                       const PenaltyFunctional& penalty, std::span<const double> gammas) {
    penalty.validate(opts.m);
    const Stage st = stage_one(a, b, opts);
    const std::size_t m = st.assembled.f.size();
    const Vec w = penalty.resolved_weights(m);
    Vec sw(m);
    for (std::size_t i = 0; i < m; ++i) sw[i] = std::sqrt(w[i]);

    Oracle oracle{st.assembled.program, m};
    oracle.program.bounds[m].upper = st.base.epsilon + kSlackTol;
    const MinNormResult mn = min_norm_point(oracle, stage_one_vertex(st), sw, anchor_values(penalty, m));

    RefinedSolution out;
    out.base = st.base;
    out.refined = make_solution(a, b, st, mn.z);
    out.penalty_value = penalty.value(out.refined.x_values.values);
    out.converged = mn.converged;
    out.iterations = mn.iterations;
    out.gap = mn.gap;
    for (const GammaResult& g : sweep(a, b, st, penalty, gammas))
        out.gamma_path.push_back({g.gamma, g.penalty, g.solution.epsilon, hausdorff(g.solution.X, out.refined.X)});
    return out;
}

std::vector<GammaResult> gamma_sweep(const ConvexPolygon& a, const ConvexPolygon& b, const DifferenceOptions& opts,
                                     const PenaltyFunctional& penalty, std::span<const double> gammas) {
    penalty.validate(opts.m);
    return sweep(a, b, stage_one(a, b, opts), penalty, gammas);
}

namespace {

double max_abs_diff(const Mat2& p, const Mat2& q) {
    return std::max({std::abs(p.a00 - q.a00), std::abs(p.a01 - q.a01), std::abs(p.a10 - q.a10), std::abs(p.a11 - q.a11)});
}

}  // namespace

SupportVector symmetrize(const SupportVector& x, std::span<const Mat2> group, double* max_mismatch) {
    if (group.empty()) throw Error(ErrorKind::NotAGroup, "empty group");
    for (const Mat2& g : group)
        if (!g.is_orthogonal(1e-10)) throw Error(ErrorKind::NotOrthogonal, "group element is not orthogonal");
    for (const Mat2& g : group) {
        for (const Mat2& h : group) {
            const Mat2 gh = g * h;
            const bool closed = std::any_of(group.begin(), group.end(), [&](const Mat2& e) { return max_abs_diff(gh, e) <= 1e-9; });
            if (!closed) throw Error(ErrorKind::NotAGroup, "group is not closed under multiplication");
        }
    }
    const DirectionNet& net = *x.net;
    SupportVector out{x.net, std::vector<double>(net.m(), 0.0)};
    double mismatch = 0.0;
    for (std::size_t i = 0; i < net.m(); ++i) {
        double acc = 0.0;
        for (const Mat2& g : group) {
            const Point2 v = g.transposed().apply(net.direction(i));
            const std::size_t k = net.nearest(v);
            mismatch = std::max(mismatch, norm(v - net.direction(k)));
            acc += x.values[k];
        }
        out.values[i] = acc / static_cast<double>(group.size());
    }
    if (max_mismatch) *max_mismatch = mismatch;
    return out;
}

std::vector<Mat2> cyclic_group(std::size_t order, bool with_reflections) {
    if (order == 0) throw Error(ErrorKind::InvalidArgument, "group order must be positive");
    std::vector<Mat2> g;
    for (std::size_t k = 0; k < order; ++k) {
        Mat2 r = Mat2::rotation(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order));
        // Snap rounding noise so exact quarter turns stay exact.
        for (double* e : {&r.a00, &r.a01, &r.a10, &r.a11})
            if (std::abs(*e) < 1e-15) *e = 0.0;
        g.push_back(r);
        if (with_reflections) g.push_back(r * Mat2::reflection_x());
    }
    return g;
}

}  // namespace extdiff
