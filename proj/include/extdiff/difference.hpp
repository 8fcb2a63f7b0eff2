#pragma once

#include "extdiff/geometry.hpp"
#include "extdiff/lp.hpp"
#include "extdiff/netdisc.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace extdiff {

enum class Reconstruction { Halfplane, RadialHull };

/// How the pairwise sublinearity rows are written.
///  - Barycentric: u_k = a u_i + b u_j with a, b >= 0 gives x_k <= a x_i + b x_j, which every
///    genuine support vector satisfies (reduces to Scaled when u_k is the exact midpoint).
///  - Scaled: |u_i + u_j| x_k <= x_i + x_j with k the rounded midpoint index.
///  - Unit: x_k <= x_i + x_j.
enum class Subadditivity { Barycentric, Scaled, Unit };

struct DifferenceOptions {
    std::size_t m = 128;
    Reconstruction reconstruction = Reconstruction::Halfplane;
    Subadditivity subadditivity = Subadditivity::Barycentric;
    bool strict_nonneg = false;
    /// Relative slack allowed when the halfplane system is empty only by rounding.
    double feas_band_tol = 1e-8;
};

struct AssemblyStats {
    std::size_t band_rows = 0;
    std::size_t pairs = 0;
    std::size_t antipodal_skipped = 0;
    std::size_t trivial_dropped = 0;
    std::size_t duplicates_removed = 0;
    std::size_t subadditivity_rows = 0;
};

/// Variables x_0..x_{m-1} then epsilon at index m.
struct AssembledProgram {
    lp::LinearProgram program;
    SupportVector f;
    AssemblyStats stats;

    std::size_t epsilon_index() const { return f.size(); }
};

AssembledProgram assemble_lp(const ConvexPolygon& a, const ConvexPolygon& b, const NetPtr& net,
                             const DifferenceOptions& opts);
/// Same program for arbitrary sampled values f (used for analytically sampled balls).
AssembledProgram assemble_lp(SupportVector f, const DifferenceOptions& opts);

/// Constant feasible point x_i = c, epsilon = max_i (c - f_i) with c = max_i f_i. A negative
/// constant is not sublinear, so with floor_at_zero c is raised to 0 when max f < 0.
std::vector<double> constant_witness(const AssembledProgram& prog, bool floor_at_zero = true);

ConvexPolygon reconstruct(const SupportVector& x, Reconstruction mode, double feas_band_tol = 1e-8);

struct Interval2 {
    double lo = 0.0;
    double hi = 0.0;
};

struct Diagnostics {
    double scope_bound = 0.0;
    Interval2 r_in_bounds;
    Interval2 R_out_bounds;
    double r_in_X = 0.0;
    double R_out_X = 0.0;
    /// Radius-bound tolerance 2 * fill_distance * scale.
    double radius_tol = 0.0;
    bool radius_bounds_hold = false;
    /// Sum of the largest vertex norms of A, B and X: a Lipschitz constant for
    /// h_A - h_B - h_X, so achieved_hausdorff <= epsilon + drift_constant * fill_distance.
    double drift_constant = 0.0;
    bool lp_unique = false;
    bool lp_degenerate = false;
    std::size_t lp_iterations = 0;
    AssemblyStats assembly;
};

struct DifferenceSolution {
    double epsilon = 0.0;
    SupportVector x_values;
    SupportVector f_values;
    ConvexPolygon X;
    ConvexPolygon B_plus_X;
    double achieved_hausdorff = 0.0;
    Diagnostics diagnostics;
    DifferenceOptions options;
};

/// Fills X, B_plus_X, achieved_hausdorff and the radius diagnostics from x and epsilon.
void finish_solution(const ConvexPolygon& a, const ConvexPolygon& b, DifferenceSolution& sol);

/// Throws Error{LpFailed} if the program is not solved to optimality.
DifferenceSolution extended_difference(const ConvexPolygon& a, const ConvexPolygon& b,
                                       const DifferenceOptions& opts = {});

Interval1 interval_difference(const Interval1& a, const Interval1& b);
Ball2 ball_difference(const Ball2& b1, const Ball2& b2);

struct ScopePair {
    std::size_t i = 0;
    std::size_t j = 0;
    double distance = 0.0;
    bool ok = false;
};

struct ScopeReport {
    double bound = 0.0;
    std::vector<ScopePair> pairs;
    bool all_ok = true;
    double worst_excess = 0.0;  // max over pairs of distance - bound
};

/// Pairwise distances between solutions of one problem against factor * 2 * min epsilon + tol.
/// A factor of sec(pi / m) accounts for evaluating net-sampled support values off the net.
ScopeReport scope_check(std::span<const ConvexPolygon> xs, double epsilon, double factor = 1.0,
                        double tol = 1e-6);
ScopeReport scope_check(std::span<const DifferenceSolution> sols, double tol = 1e-6);

}  // namespace extdiff
