#include "extdiff/netdisc.hpp"

#include "extdiff/error.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>

namespace extdiff {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

NetPtr build_net(std::size_t m) {
    if (m < 8) throw Error(ErrorKind::TooCoarse, "direction net needs m >= 8, got " + std::to_string(m));
    std::shared_ptr<DirectionNet> net(new DirectionNet());
    net->directions_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(m);
        net->directions_.push_back({std::cos(t), std::sin(t)});
    }
    net->fill_distance_ = 2.0 * std::sin(std::numbers::pi / (2.0 * static_cast<double>(m)));
    return net;
}

double DirectionNet::angle(std::size_t i) const {
    return kTwoPi * static_cast<double>(i) / static_cast<double>(m());
}

double DirectionNet::spacing() const noexcept { return kTwoPi / static_cast<double>(m()); }

std::size_t DirectionNet::nearest(Point2 u) const {
    const auto n = static_cast<double>(m());
    double t = std::atan2(u.y, u.x);
    if (t < 0.0) t += kTwoPi;
    const double pos = t / kTwoPi * n;
    // Candidates on either side of the angle; the distance comparison settles ties
    // (equal chord lengths) in favour of the smaller index.
    const auto lo = static_cast<std::size_t>(std::floor(pos)) % m();
    const std::size_t hi = (lo + 1) % m();
    const double dlo = norm(u - directions_[lo]);
    const double dhi = norm(u - directions_[hi]);
    const double tie = 1e-12;
    if (std::abs(dlo - dhi) <= tie) return std::min(lo, hi);
    return dlo < dhi ? lo : hi;
}

SupportVector sample_support(const ConvexPolygon& p, const NetPtr& net) {
    SupportVector sv{net, {}};
    sv.values.reserve(net->m());
    for (const Point2& u : net->directions()) {
        double best = -std::numeric_limits<double>::infinity();
        for (const Point2& v : p.vertices()) best = std::max(best, dot(u, v));
        sv.values.push_back(best);
    }
    return sv;
}

SupportVector sample_support(const Ball2& b, const NetPtr& net) {
    SupportVector sv{net, {}};
    sv.values.reserve(net->m());
    for (const Point2& u : net->directions()) sv.values.push_back(dot(u, b.center) + b.radius);
    return sv;
}

std::optional<std::size_t> k_index(const DirectionNet& net, std::size_t i, std::size_t j) {
    if (i == j) throw Error(ErrorKind::SameIndex, "k_index needs two distinct directions");
    const Point2 s = net.direction(i) + net.direction(j);
    const double len = norm(s);
    if (len <= kAntipodalTol) return std::nullopt;
    // On a uniform net the normalised sum sits at the angular midpoint of the shorter arc,
    // so rounding the midpoint index is exact; half-integers are genuine ties.
    const std::size_t m = net.m();
    std::size_t lo = std::min(i, j), hi = std::max(i, j);
    std::size_t gap = hi - lo;
    std::size_t twice_mid;  // 2 * midpoint index, modulo 2m
    if (2 * gap < m) {
        twice_mid = lo + hi;
    } else {
        twice_mid = (lo + hi + m) % (2 * m);
    }
    if (twice_mid % 2 == 0) return (twice_mid / 2) % m;
    const std::size_t a = (twice_mid / 2) % m;
    const std::size_t b = (a + 1) % m;
    return std::min(a, b);
}

double extend_support(const SupportVector& sv, Point2 u) {
    if (std::abs(norm(u) - 1.0) > 1e-12) throw Error(ErrorKind::NonUnit, "direction is not a unit vector");
    return sv.values.at(sv.net->nearest(u));
}

}  // namespace extdiff
