#include "extdiff/difference.hpp"

#include "extdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

namespace extdiff {

namespace {

using lp::Relation;
using lp::Term;

// Sums coefficients of repeated variables and drops zeros; sorted by variable.
std::vector<Term> normalise_terms(std::vector<Term> terms) {
    std::map<std::size_t, double> acc;
    for (const Term& t : terms) acc[t.var] += t.coef;
    std::vector<Term> out;
    for (const auto& [v, c] : acc)
        if (c != 0.0) out.push_back({v, c});
    return out;
}

}  // namespace

AssembledProgram assemble_lp(SupportVector f, const DifferenceOptions& opts) {
    const DirectionNet& net = *f.net;
    const std::size_t m = net.m();
    if (f.values.size() != m) throw Error(ErrorKind::InvalidArgument, "sampled values do not match the net");
    for (double v : f.values)
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "non-finite support value");

    AssembledProgram out{lp::LinearProgram::with_vars(m + 1), std::move(f), {}};
    auto& prog = out.program;
    auto& stats = out.stats;
    const std::size_t eps = m;
    prog.objective[eps] = 1.0;
    prog.bounds[eps].lower = 0.0;
    if (opts.strict_nonneg)
        for (std::size_t i = 0; i < m; ++i) prog.bounds[i].lower = 0.0;

    for (std::size_t i = 0; i < m; ++i) {
        const double fi = out.f.values[i];
        prog.add_constraint({{i, 1.0}, {eps, -1.0}}, Relation::LessEqual, fi);
        prog.add_constraint({{i, 1.0}, {eps, 1.0}}, Relation::GreaterEqual, fi);
        stats.band_rows += 2;
    }

    std::set<std::vector<std::pair<std::size_t, double>>> seen;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            ++stats.pairs;
            const auto k = k_index(net, i, j);
            if (!k) {
                ++stats.antipodal_skipped;
                continue;
            }
            const Point2 ui = net.direction(i), uj = net.direction(j), uk = net.direction(*k);
            std::vector<Term> terms;
            switch (opts.subadditivity) {
                case Subadditivity::Barycentric: {
                    if (*k == i || *k == j) {
                        ++stats.trivial_dropped;
                        continue;
                    }
                    const double det = cross(ui, uj);
                    const double alpha = cross(uk, uj) / det;
                    const double beta = cross(ui, uk) / det;
                    const double s = 2.0 / (alpha + beta);
                    terms = {{*k, s}, {i, -alpha * s}, {j, -beta * s}};
                    break;
                }
                case Subadditivity::Scaled:
                    terms = {{*k, norm(ui + uj)}, {i, -1.0}, {j, -1.0}};
                    break;
                case Subadditivity::Unit:
                    terms = {{*k, 1.0}, {i, -1.0}, {j, -1.0}};
                    break;
            }
            terms = normalise_terms(std::move(terms));
            if (terms.empty()) {
                ++stats.trivial_dropped;
                continue;
            }
            std::vector<std::pair<std::size_t, double>> key;
            for (const Term& t : terms) key.emplace_back(t.var, t.coef);
            if (!seen.insert(std::move(key)).second) {
                ++stats.duplicates_removed;
                continue;
            }
            prog.add_constraint(std::move(terms), Relation::LessEqual, 0.0);
            ++stats.subadditivity_rows;
        }
    }
    return out;
}

AssembledProgram assemble_lp(const ConvexPolygon& a, const ConvexPolygon& b, const NetPtr& net,
                             const DifferenceOptions& opts) {
    SupportVector f = sample_support(a, net);
    const SupportVector hb = sample_support(b, net);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] -= hb.values[i];
    return assemble_lp(std::move(f), opts);
}

std::vector<double> constant_witness(const AssembledProgram& prog, bool floor_at_zero) {
    const auto& f = prog.f.values;
    double c = *std::max_element(f.begin(), f.end());
    if (floor_at_zero) c = std::max(c, 0.0);
    double eps = 0.0;
    for (double v : f) eps = std::max(eps, c - v);
    std::vector<double> z(f.size(), c);
    z.push_back(eps);
    return z;
}

namespace {

// Keeps the part of poly with z . u <= c. Points within tol of the line count as on it, so
// an edge lying along the line is kept whole instead of being cut at a rounding-noise crossing.
std::vector<Point2> clip(const std::vector<Point2>& poly, Point2 u, double c, double tol) {
    std::vector<Point2> out;
    const std::size_t n = poly.size();
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = poly[i], q = poly[(i + 1) % n];
        const double sp = dot(u, p) - c, sq = dot(u, q) - c;
        if (sp <= tol) out.push_back(p);
        if ((sp < -tol && sq > tol) || (sp > tol && sq < -tol)) {
            const double t = sp / (sp - sq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

std::vector<Point2> halfplane_intersection(const SupportVector& x, double slack, double box) {
    std::vector<Point2> poly{{-box, -box}, {box, -box}, {box, box}, {-box, box}};
    const auto& dirs = x.net->directions();
    const double tol = 1e-12 * box;
    for (std::size_t i = 0; i < dirs.size() && !poly.empty(); ++i) poly = clip(poly, dirs[i], x.values[i] + slack, tol);
    return poly;
}

// Single-linkage clustering of points closer than tol, each cluster replaced by its mean.
std::vector<Point2> merge_close(const std::vector<Point2>& pts, double tol) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (norm(pts[i] - pts[j]) <= tol) parent[find(i)] = find(j);
    std::map<std::size_t, std::pair<Point2, std::size_t>> acc;
    for (std::size_t i = 0; i < n; ++i) {
        auto& [sum, count] = acc[find(i)];
        sum = sum + pts[i];
        ++count;
    }
    std::vector<Point2> out;
    for (const auto& [root, sc] : acc) out.push_back((1.0 / static_cast<double>(sc.second)) * sc.first);
    return out;
}

// A polygon thinner than tol in some edge direction collapses to its longest chord.
ConvexPolygon collapse_thin(const ConvexPolygon& p, double tol) {
    const auto& v = p.vertices();
    if (v.size() < 3) return p;
    double width = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2 a = v[i], e = v[(i + 1) % v.size()] - a;
        const double len = norm(e);
        double far = 0.0;
        for (const Point2& q : v) far = std::max(far, std::abs(cross(e, q - a)) / len);
        width = std::min(width, far);
    }
    if (width > tol) return p;
    Point2 best_a = v[0], best_b = v[0];
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (norm(v[i] - v[j]) > best) {
                best = norm(v[i] - v[j]);
                best_a = v[i];
                best_b = v[j];
            }
    return segment(best_a, best_b);
}

}  // namespace

ConvexPolygon reconstruct(const SupportVector& x, Reconstruction mode, double feas_band_tol) {
    const auto& dirs = x.net->directions();
    if (x.values.size() != dirs.size()) throw Error(ErrorKind::InvalidArgument, "support vector does not match its net");
    double scale = 1.0;
    for (double v : x.values) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "non-finite support value");
        scale = std::max(scale, std::abs(v));
    }
    if (mode == Reconstruction::RadialHull) {
        std::vector<Point2> pts;
        pts.reserve(dirs.size());
        for (std::size_t i = 0; i < dirs.size(); ++i) pts.push_back(x.values[i] * dirs[i]);
        return canonicalize(pts);
    }
    const double box = 4.0 * scale + 1.0;
    std::vector<Point2> poly = halfplane_intersection(x, 0.0, box);
    if (poly.empty()) poly = halfplane_intersection(x, feas_band_tol * scale, box);
    if (poly.empty()) throw Error(ErrorKind::EmptySet, "halfplane system has empty intersection");
    const double snap = 1e-7 * scale;
    return collapse_thin(canonicalize(merge_close(poly, snap)), snap);
}

void finish_solution(const ConvexPolygon& a, const ConvexPolygon& b, DifferenceSolution& sol) {
    const DirectionNet& net = *sol.x_values.net;
    sol.X = reconstruct(sol.x_values, sol.options.reconstruction, sol.options.feas_band_tol);
    sol.B_plus_X = minkowski_sum(b, sol.X);
    sol.achieved_hausdorff = hausdorff(a, sol.B_plus_X);

    Diagnostics& d = sol.diagnostics;
    d.scope_bound = 2.0 * sol.epsilon;
    const double rin_a = inscribed_radius(a).radius, rin_b = inscribed_radius(b).radius;
    const double rout_a = circumscribed_radius(a).radius, rout_b = circumscribed_radius(b).radius;
    // The bounds follow from d_H(A, B + X) <= e, so they are stated with the exact distance of
    // the reconstructed X rather than the sampled epsilon.
    const double e = std::max(sol.epsilon, sol.achieved_hausdorff);
    d.r_in_bounds = {std::max(0.0, rin_a - rout_b - e), std::max(0.0, rin_a - rin_b + e)};
    d.R_out_bounds = {std::max(0.0, rout_a - rout_b - e), std::max(0.0, rout_a - rin_b + e)};
    d.r_in_X = inscribed_radius(sol.X).radius;
    d.R_out_X = circumscribed_radius(sol.X).radius;
    const double scale = std::max({1.0, max_vertex_norm(a), max_vertex_norm(b)});
    d.radius_tol = 2.0 * net.fill_distance() * scale;
    d.radius_bounds_hold = d.r_in_X >= d.r_in_bounds.lo - d.radius_tol && d.r_in_X <= d.r_in_bounds.hi + d.radius_tol &&
                           d.R_out_X >= d.R_out_bounds.lo - d.radius_tol && d.R_out_X <= d.R_out_bounds.hi + d.radius_tol;
    d.drift_constant = max_vertex_norm(a) + max_vertex_norm(b) + max_vertex_norm(sol.X);
}

DifferenceSolution extended_difference(const ConvexPolygon& a, const ConvexPolygon& b, const DifferenceOptions& opts) {
    const NetPtr net = build_net(opts.m);
    AssembledProgram asm_ = assemble_lp(a, b, net, opts);
    const lp::LpSolution sol = lp::solve(asm_.program);
    if (sol.status != lp::Status::Optimal) throw Error(ErrorKind::LpFailed, "difference program was not solved to optimality");

    const std::size_t m = net->m();
    DifferenceSolution out;
    out.options = opts;
    out.epsilon = std::max(0.0, sol.values[m]);
    out.x_values = SupportVector{net, std::vector<double>(sol.values.begin(), sol.values.begin() + static_cast<long>(m))};
    out.f_values = asm_.f;
    out.diagnostics.assembly = asm_.stats;
    out.diagnostics.lp_unique = lp::uniqueness_probe(asm_.program, sol);
    out.diagnostics.lp_degenerate = sol.degenerate;
    out.diagnostics.lp_iterations = sol.iterations;
    finish_solution(a, b, out);
    return out;
}

Interval1 interval_difference(const Interval1& a, const Interval1& b) {
    if (a.width() < b.width()) {
        const double c = a.midpoint() - b.midpoint();
        return {c, c};
    }
    return {a.lo - b.lo, a.hi - b.hi};
}

Ball2 ball_difference(const Ball2& b1, const Ball2& b2) {
    return {b1.center - b2.center, std::max(0.0, b1.radius - b2.radius)};
}

ScopeReport scope_check(std::span<const ConvexPolygon> xs, double epsilon, double factor, double tol) {
    ScopeReport rep;
    rep.bound = factor * 2.0 * epsilon + tol;
    rep.worst_excess = xs.size() < 2 ? 0.0 : -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const double d = hausdorff(xs[i], xs[j]);
            const bool ok = d <= rep.bound;
            rep.pairs.push_back({i, j, d, ok});
            rep.all_ok = rep.all_ok && ok;
            rep.worst_excess = std::max(rep.worst_excess, d - rep.bound);
        }
    }
    return rep;
}

ScopeReport scope_check(std::span<const DifferenceSolution> sols, double tol) {
    if (sols.empty()) return {};
    std::vector<ConvexPolygon> xs;
    double eps = std::numeric_limits<double>::infinity();
    for (const auto& s : sols) {
        xs.push_back(s.X);
        eps = std::min(eps, s.epsilon);
    }
    const double factor = 1.0 / std::cos(std::numbers::pi / static_cast<double>(sols.front().x_values.net->m()));
    return scope_check(xs, eps, factor, tol);
}

}  // namespace extdiff
