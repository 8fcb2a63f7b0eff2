#include "extdiff/cli.hpp"

#include "extdiff/difference.hpp"
#include "extdiff/refine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

namespace extdiff::cli {

namespace {

struct Tally {
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst_residual = 0.0;
    double worst_excess = -std::numeric_limits<double>::infinity();
};

class Suite {
public:
    // Records residual r against limit; passes when r <= limit.
    void record(const std::string& name, double r, double limit) {
        Tally& t = tallies_[name];
        ++t.cases;
        if (!(r <= limit)) ++t.failures;
        t.worst_residual = std::max(t.worst_residual, r);
        t.worst_excess = std::max(t.worst_excess, r - limit);
        if (std::isnan(r)) t.worst_excess = std::numeric_limits<double>::infinity();
    }
    void touch(const std::string& name) { tallies_[name]; }

    bool report(std::ostream& out) const {
        bool ok = true;
        for (const auto& [name, t] : tallies_) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "property=%s status=%s cases=%zu failures=%zu worst_residual=%.3e worst_excess=%.3e\n",
                          name.c_str(), t.failures == 0 ? "pass" : "fail", t.cases, t.failures, t.worst_residual,
                          t.cases == 0 ? 0.0 : t.worst_excess);
            out << buf;
            ok = ok && t.failures == 0;
        }
        return ok;
    }

private:
    std::map<std::string, Tally> tallies_;
};

ConvexPolygon random_polygon(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(3, 10);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::vector<Point2> pts(static_cast<std::size_t>(count(rng)));
    for (Point2& p : pts) p = {coord(rng), coord(rng)};
    return canonicalize(pts);
}

ConvexPolygon jitter(const ConvexPolygon& p, double eta, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi), len(0.0, eta);
    std::vector<Point2> pts;
    for (const Point2& v : p.vertices()) {
        const double t = ang(rng), r = len(rng);
        pts.push_back({v.x + r * std::cos(t), v.y + r * std::sin(t)});
    }
    return canonicalize(pts);
}

double dist_to_origin_set(const ConvexPolygon& x) { return hausdorff(x, ConvexPolygon{}); }

std::vector<double> shifted(const DifferenceSolution& s, Point2 v, double sign) {
    std::vector<double> z = s.x_values.values;
    const auto& dirs = s.x_values.net->directions();
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += sign * dot(dirs[i], v);
    z.push_back(s.epsilon);
    return z;
}

std::vector<double> with_epsilon(std::vector<double> x, double eps) {
    x.push_back(eps);
    return x;
}

void geometry_trial(Suite& s, std::mt19937_64& rng) {
    const ConvexPolygon p = random_polygon(rng), q = random_polygon(rng), r = random_polygon(rng);
    const ConvexPolygon pq = minkowski_sum(p, q);

    const NetPtr net = build_net(256);
    double add = 0.0;
    for (const Point2& u : net->directions()) add = std::max(add, std::abs(support(pq, u) - support(p, u) - support(q, u)));
    s.record("geometry.support_additivity", add, 1e-9);

    const NetPtr fine = build_net(4096);
    double net_max = 0.0;
    for (const Point2& u : fine->directions()) net_max = std::max(net_max, std::abs(support(p, u) - support(q, u)));
    const double hd = hausdorff(p, q);
    const double slack = (max_vertex_norm(p) + max_vertex_norm(q)) * fine->fill_distance();
    s.record("geometry.hausdorff_support_identity", std::abs(hd - net_max), 1e-6 + slack);
    s.record("geometry.hausdorff_dominates_net", net_max - hd, 1e-9);

    s.record("geometry.hausdorff_symmetry", std::abs(hausdorff(p, q) - hausdorff(q, p)), 1e-9);
    s.record("geometry.triangle_inequality", hausdorff(p, r) - hausdorff(p, q) - hausdorff(q, r), 1e-9);

    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi), sh(-3.0, 3.0);
    Mat2 t = Mat2::rotation(ang(rng));
    if (rng() % 2) t = t * Mat2::reflection_x();
    const Point2 shift{sh(rng), sh(rng)};
    s.record("geometry.transform_isometry", std::abs(hausdorff(transform(p, t, shift), transform(q, t, shift)) - hd), 1e-9);

    // p is contained in hull(p, q).
    std::vector<Point2> both = p.vertices();
    both.insert(both.end(), q.vertices().begin(), q.vertices().end());
    const ConvexPolygon big = canonicalize(both);
    s.record("geometry.inscribed_monotone", inscribed_radius(p).radius - inscribed_radius(big).radius, 1e-9);
    s.record("geometry.circumscribed_monotone", circumscribed_radius(p).radius - circumscribed_radius(big).radius, 1e-9);

    // Disc of radius delta approximated by a regular 64-gon with inradius delta cos(pi/64).
    std::uniform_real_distribution<double> dd(0.1, 2.0);
    const double delta = dd(rng);
    const std::size_t k = 64;
    const ConvexPolygon ball = regular_polygon({0.0, 0.0}, delta, k);
    const double grow = inscribed_radius(minkowski_sum(p, ball)).radius - inscribed_radius(p).radius;
    const double lo = delta * std::cos(std::numbers::pi / static_cast<double>(k));
    s.record("geometry.ball_dilation", std::max(lo - grow, grow - delta), 1e-9);
}

void difference_trial(Suite& s, std::mt19937_64& rng, std::size_t m) {
    const ConvexPolygon a = random_polygon(rng), b = random_polygon(rng), c = random_polygon(rng);
    DifferenceOptions opts;
    opts.m = m;
    const NetPtr net = build_net(m);
    const double fill = net->fill_distance();

    const DifferenceSolution base = extended_difference(a, b, opts);
    const AssembledProgram prog = assemble_lp(a, b, net, opts);

    s.record("lp.constant_witness_feasible", lp::max_violation(prog.program, constant_witness(prog)), lp::kFeasTol);

    {
        const DifferenceSolution self = extended_difference(a, a, opts);
        s.record("difference.self_is_origin", std::max(self.epsilon, dist_to_origin_set(self.X)), 1e-6);
    }
    {
        const DifferenceSolution canc = extended_difference(minkowski_sum(a, b), b, opts);
        const double scale = std::max(1.0, max_vertex_norm(a));
        s.record("difference.sum_cancellation_epsilon", canc.epsilon, 1e-7);
        s.record("difference.sum_cancellation_set", hausdorff(canc.X, a), 2.0 * fill * scale);
    }
    for (double lambda : {0.5, 2.0}) {
        const ConvexPolygon la = scale(a, lambda), lb = scale(b, lambda);
        const DifferenceSolution sl = extended_difference(la, lb, opts);
        s.record("difference.scale_epsilon", std::abs(sl.epsilon - lambda * base.epsilon), 1e-6 * lambda);
        std::vector<double> z = base.x_values.values;
        for (double& v : z) v *= lambda;
        z.push_back(lambda * base.epsilon);
        s.record("difference.scale_membership", lp::max_violation(assemble_lp(la, lb, net, opts).program, z), 1e-6 * lambda);
    }
    std::uniform_real_distribution<double> sh(-2.0, 2.0);
    {
        const Point2 v{sh(rng), sh(rng)};
        const ConvexPolygon bv = translate(b, v);
        const DifferenceSolution sb = extended_difference(a, bv, opts);
        s.record("difference.shift_b_epsilon", std::abs(sb.epsilon - base.epsilon), 1e-6);
        s.record("difference.shift_b_membership", lp::max_violation(assemble_lp(a, bv, net, opts).program, shifted(base, v, -1.0)), 1e-6);
    }
    {
        const Point2 v{sh(rng), sh(rng)};
        const ConvexPolygon av = translate(a, v);
        const DifferenceSolution sa = extended_difference(av, b, opts);
        s.record("difference.shift_a_epsilon", std::abs(sa.epsilon - base.epsilon), 1e-6);
        s.record("difference.shift_a_membership", lp::max_violation(assemble_lp(av, b, net, opts).program, shifted(base, v, 1.0)), 1e-6);
    }
    {
        const DifferenceSolution sc = extended_difference(minkowski_sum(a, c), minkowski_sum(b, c), opts);
        s.record("difference.common_summand_epsilon", std::abs(sc.epsilon - base.epsilon), 1e-6);
    }
    {
        std::uniform_int_distribution<std::size_t> kk(1, m - 1);
        const std::size_t k = kk(rng);
        const Mat2 rot = Mat2::rotation(net->angle(k));
        const ConvexPolygon ra = transform(a, rot), rb = transform(b, rot);
        const DifferenceSolution sr = extended_difference(ra, rb, opts);
        s.record("difference.rotation_epsilon", std::abs(sr.epsilon - base.epsilon), 1e-9);
        std::vector<double> z(m);
        for (std::size_t i = 0; i < m; ++i) z[(i + k) % m] = base.x_values.values[i];
        s.record("difference.rotation_membership",
                 lp::max_violation(assemble_lp(ra, rb, net, opts).program, with_epsilon(z, base.epsilon)), 1e-8);
        s.record("difference.rotation_set", hausdorff(transform(base.X, rot), reconstruct(SupportVector{net, z}, opts.reconstruction)), 1e-6);
    }
    {
        const double eta = 1e-3;
        const DifferenceSolution sp = extended_difference(jitter(a, eta, rng), jitter(b, eta, rng), opts);
        s.record("difference.perturbation_stability", std::abs(sp.epsilon - base.epsilon), 2.0 * eta + 1e-9);
    }

    const RefinedSolution origin = refine(a, b, opts, PenaltyFunctional::l2_origin());
    const RefinedSolution anchored = refine(a, b, opts, PenaltyFunctional::l2_anchor(sample_support(a, net)));
    for (const RefinedSolution* r : {&origin, &anchored}) {
        s.record("refine.face_feasible", r->refined.epsilon - base.epsilon, kSlackTol + 1e-8);
        s.record("refine.converged", r->converged ? 0.0 : 1.0, 0.0);
    }
    {
        const std::vector<ConvexPolygon> xs{base.X, origin.X_refined(), anchored.X_refined()};
        const double factor = 1.0 / std::cos(std::numbers::pi / static_cast<double>(m));
        const ScopeReport rep = scope_check(xs, base.epsilon + kSlackTol, factor, 1e-6);
        for (const ScopePair& pr : rep.pairs) s.record("difference.scope_bound", pr.distance, rep.bound);
    }
    for (const DifferenceSolution* sol : {&base, &origin.refined, &anchored.refined}) {
        const Diagnostics& d = sol->diagnostics;
        const double excess = std::max({d.r_in_bounds.lo - d.r_in_X, d.r_in_X - d.r_in_bounds.hi, d.R_out_bounds.lo - d.R_out_X,
                                        d.R_out_X - d.R_out_bounds.hi, 0.0});
        s.record("difference.radius_bounds", excess, d.radius_tol);
        s.record("difference.drift_bound", sol->achieved_hausdorff - sol->epsilon, d.drift_constant * fill + 1e-9);
    }
}

}  // namespace

bool run_checks(const CheckConfig& cfg, std::ostream& out) {
    Suite suite;
    for (const char* name : {"geometry.support_additivity", "difference.self_is_origin", "difference.scope_bound",
                             "difference.radius_bounds", "lp.constant_witness_feasible"})
        suite.touch(name);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        geometry_trial(suite, rng);
        difference_trial(suite, rng, cfg.m);
    }
    out << "trials=" << cfg.trials << "\nseed=" << cfg.seed << "\nm=" << cfg.m << "\n";
    const bool ok = suite.report(out);
    out << "result=" << (ok ? "pass" : "fail") << "\n";
    return ok;
}

}  // namespace extdiff::cli
