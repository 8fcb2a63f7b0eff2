#pragma once

#include "extdiff/difference.hpp"
#include "extdiff/geometry.hpp"
#include "extdiff/netdisc.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace extdiff {

/// Q(x) = sum_i w_i (x_i - a_i)^2 with a = 0 (L2Origin) or a = anchor (L2Anchor).
struct PenaltyFunctional {
    enum class Kind { L2Origin, L2Anchor };
    Kind kind = Kind::L2Origin;
    std::optional<SupportVector> anchor;
    /// Empty means the midpoint rule 2 pi / m.
    std::vector<double> weights;

    static PenaltyFunctional l2_origin() { return {}; }
    static PenaltyFunctional l2_anchor(SupportVector a) { return {Kind::L2Anchor, std::move(a), {}}; }

    /// Throws Error{InvalidArgument} on non-positive weights or size mismatch.
    void validate(std::size_t m) const;
    std::vector<double> resolved_weights(std::size_t m) const;
    double anchor_at(std::size_t i) const { return anchor ? anchor->values[i] : 0.0; }
    double value(std::span<const double> x) const;
};

struct GammaPoint {
    double gamma = 0.0;
    double penalty = 0.0;
    double epsilon = 0.0;
    /// d_H(X_gamma, X_refined); filled by refine() when it runs the sweep.
    double distance_to_refined = 0.0;
};

struct RefinedSolution {
    DifferenceSolution base;
    /// Selected minimizer; its epsilon is the attained band residual max |x_i - f_i|.
    DifferenceSolution refined;
    double penalty_value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double gap = 0.0;
    std::vector<GammaPoint> gamma_path;

    const SupportVector& x_refined() const { return refined.x_values; }
    const ConvexPolygon& X_refined() const { return refined.X; }
};

/// Slack on the epsilon <= epsilon* row of the second stage.
inline constexpr double kSlackTol = 1e-7;
inline constexpr double kGapTol = 1e-8;
inline constexpr std::size_t kMaxRefineIterations = 500;

/// Lexicographic selection: epsilon* from the program, then the Q-minimizer over the
/// epsilon* face. When gammas is non-empty the sweep is also run and recorded.
RefinedSolution refine(const ConvexPolygon& a, const ConvexPolygon& b, const DifferenceOptions& opts,
                       const PenaltyFunctional& penalty, std::span<const double> gammas = {});

struct GammaResult {
    double gamma = 0.0;
    DifferenceSolution solution;
    double penalty = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Minimizes epsilon + gamma Q(x) over the program's polytope for each gamma, by golden-section
/// search over the epsilon level with the min-norm-point solve inside.
/// Throws Error{InvalidArgument} unless gammas are positive and strictly decreasing.
std::vector<GammaResult> gamma_sweep(const ConvexPolygon& a, const ConvexPolygon& b, const DifferenceOptions& opts,
                                     const PenaltyFunctional& penalty, std::span<const double> gammas);

/// Orbit average out[i] = mean over g of x[nearest(g^T u_i)].
/// Throws NotOrthogonal or NotAGroup. If given, max_mismatch receives the largest distance
/// between some g^T u_i and its nearest net direction.
SupportVector symmetrize(const SupportVector& x, std::span<const Mat2> group, double* max_mismatch = nullptr);

/// Rotations by multiples of 2 pi / order, optionally with their reflected copies.
std::vector<Mat2> cyclic_group(std::size_t order, bool with_reflections = false);

}  // namespace extdiff
