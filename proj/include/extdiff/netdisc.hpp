#pragma once

#include "extdiff/geometry.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace extdiff {

/// Skip subadditivity pairs whose direction sum is shorter than this.
inline constexpr double kAntipodalTol = 1e-9;

/// Uniform net u_i = (cos 2 pi i / m, sin 2 pi i / m) on the unit circle.
class DirectionNet {
public:
    std::size_t m() const noexcept { return directions_.size(); }
    const std::vector<Point2>& directions() const noexcept { return directions_; }
    Point2 direction(std::size_t i) const { return directions_.at(i); }
    double angle(std::size_t i) const;
    /// Worst distance from a unit vector to its nearest net direction: 2 sin(pi / 2m).
    double fill_distance() const noexcept { return fill_distance_; }
    double spacing() const noexcept;

    /// Index of the net direction nearest to unit vector u; ties go to the smaller index.
    std::size_t nearest(Point2 u) const;

    friend std::shared_ptr<const DirectionNet> build_net(std::size_t m);

private:
    DirectionNet() = default;
    std::vector<Point2> directions_;
    double fill_distance_ = 0.0;
};

using NetPtr = std::shared_ptr<const DirectionNet>;

/// Throws Error{TooCoarse} for m < 8.
NetPtr build_net(std::size_t m);

/// Sampled support-function values over a net.
struct SupportVector {
    NetPtr net;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

SupportVector sample_support(const ConvexPolygon& p, const NetPtr& net);
/// h(u) = c . u + r for a disc, sampled exactly.
SupportVector sample_support(const Ball2& b, const NetPtr& net);

/// Net index nearest to (u_i + u_j) / |u_i + u_j|, or nullopt when the pair is antipodal.
std::optional<std::size_t> k_index(const DirectionNet& net, std::size_t i, std::size_t j);

/// Nearest-neighbour extension of sampled values to any unit direction.
double extend_support(const SupportVector& sv, Point2 u);

}  // namespace extdiff
