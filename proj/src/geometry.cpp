#include "extdiff/geometry.hpp"

#include "extdiff/error.hpp"
#include "extdiff/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace extdiff {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NonUnit: return "NonUnit";
        case ErrorKind::NotOrthogonal: return "NotOrthogonal";
        case ErrorKind::NegativeScale: return "NegativeScale";
        case ErrorKind::TooCoarse: return "TooCoarse";
        case ErrorKind::SameIndex: return "SameIndex";
        case ErrorKind::MalformedProgram: return "MalformedProgram";
        case ErrorKind::EmptySet: return "EmptySet";
        case ErrorKind::LpFailed: return "LpFailed";
        case ErrorKind::NotAGroup: return "NotAGroup";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

double norm(Point2 p) { return std::hypot(p.x, p.y); }

Mat2 Mat2::rotation(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c, -s, s, c};
}

Mat2 Mat2::reflection_x() { return {-1.0, 0.0, 0.0, 1.0}; }

Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a00 * r.a00 + l.a01 * r.a10, l.a00 * r.a01 + l.a01 * r.a11,
            l.a10 * r.a00 + l.a11 * r.a10, l.a10 * r.a01 + l.a11 * r.a11};
}

bool Mat2::is_orthogonal(double tol) const {
    const Mat2 p = transposed() * *this;
    return std::abs(p.a00 - 1.0) <= tol && std::abs(p.a11 - 1.0) <= tol && std::abs(p.a01) <= tol &&
           std::abs(p.a10) <= tol;
}

namespace {

bool lex_less(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

double orient(Point2 o, Point2 a, Point2 b) { return cross(a - o, b - o); }

}  // namespace

ConvexPolygon canonicalize(std::span<const Point2> points) {
    if (points.empty()) throw Error(ErrorKind::EmptyInput, "no points given");
    std::vector<Point2> pts(points.begin(), points.end());
    for (const Point2& p : pts)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error(ErrorKind::NonFinite, "non-finite coordinate");
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return ConvexPolygon(std::move(pts));

    // Andrew's monotone chain; collinear points are dropped.
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {
        while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= kCollinearEps) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= kCollinearEps) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return ConvexPolygon(std::move(hull));
}

double support(const ConvexPolygon& p, Point2 u) {
    if (std::abs(norm(u) - 1.0) > 1e-12) throw Error(ErrorKind::NonUnit, "direction is not a unit vector");
    double best = -std::numeric_limits<double>::infinity();
    for (const Point2& v : p.vertices()) best = std::max(best, dot(u, v));
    return best;
}

ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
    const auto& a = p.vertices();
    const auto& b = q.vertices();
    if (a.size() < 3 || b.size() < 3) {
        std::vector<Point2> sums;
        sums.reserve(a.size() * b.size());
        for (const Point2& x : a)
            for (const Point2& y : b) sums.push_back(x + y);
        return canonicalize(sums);
    }
    // Both canonical polygons start at their lexicographic minimum, which is extreme in
    // the same direction for both, so their CCW edge sequences merge by polar angle.
    std::vector<Point2> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    const std::size_t n = a.size(), m = b.size();
    while (i < n || j < m) {
        out.push_back(a[i % n] + b[j % m]);
        const Point2 ea = a[(i + 1) % n] - a[i % n];
        const Point2 eb = b[(j + 1) % m] - b[j % m];
        const double c = cross(ea, eb);
        if (j >= m || (i < n && c > 0.0)) ++i;
        else if (i >= n || c < 0.0) ++j;
        else {
            ++i;
            ++j;
        }
    }
    return canonicalize(out);
}

namespace {

double point_segment_distance(Point2 z, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return norm(z - a);
    const double t = std::clamp(dot(z - a, ab) / len2, 0.0, 1.0);
    return norm(z - (a + t * ab));
}

}  // namespace

double distance_to(const ConvexPolygon& p, Point2 z) {
    const auto& v = p.vertices();
    if (v.size() == 1) return norm(z - v[0]);
    if (v.size() == 2) return point_segment_distance(z, v[0], v[1]);
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2 a = v[i], b = v[(i + 1) % v.size()];
        if (orient(a, b, z) < 0.0) inside = false;
        best = std::min(best, point_segment_distance(z, a, b));
    }
    return inside ? 0.0 : best;
}

double hausdorff(const ConvexPolygon& p, const ConvexPolygon& q) {
    double d = 0.0;
    for (const Point2& v : p.vertices()) d = std::max(d, distance_to(q, v));
    for (const Point2& v : q.vertices()) d = std::max(d, distance_to(p, v));
    return d;
}

RadiusResult inscribed_radius(const ConvexPolygon& p) {
    const auto& v = p.vertices();
    if (v.size() == 1) return {0.0, v[0]};
    if (v.size() == 2) return {0.0, 0.5 * (v[0] + v[1])};
    // Chebyshev centre: maximise r subject to n_e . c + r |n_e| <= n_e . a_e for every edge
    // with outward normal n_e. Variables (cx, cy, r).
    auto lp = lp::LinearProgram::with_vars(3);
    lp.objective = {0.0, 0.0, -1.0};
    lp.bounds[2].lower = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2 a = v[i], b = v[(i + 1) % v.size()];
        const Point2 e = b - a;
        Point2 n{e.y, -e.x};
        const double len = norm(n);
        n = (1.0 / len) * n;
        lp.add_constraint({{0, n.x}, {1, n.y}, {2, 1.0}}, lp::Relation::LessEqual, dot(n, a));
    }
    const auto sol = lp::solve(lp);
    if (sol.status != lp::Status::Optimal) throw Error(ErrorKind::LpFailed, "Chebyshev centre program failed");
    return {sol.values[2], Point2{sol.values[0], sol.values[1]}};
}

namespace {

struct Circle {
    Point2 c;
    double r = 0.0;
    bool contains(Point2 p) const { return norm(p - c) <= r * (1.0 + 1e-12) + 1e-12; }
};

Circle circle_two(Point2 a, Point2 b) { return {0.5 * (a + b), 0.5 * norm(a - b)}; }

Circle circle_three(Point2 a, Point2 b, Point2 c) {
    const Point2 ab = b - a, ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    if (std::abs(d) < 1e-18) {
        // Collinear: the widest pair decides.
        Circle best = circle_two(a, b);
        for (const Circle& cand : {circle_two(a, c), circle_two(b, c)})
            if (cand.r > best.r) best = cand;
        return best;
    }
    const double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
    const Point2 off{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
    return {a + off, norm(off)};
}

}  // namespace

RadiusResult circumscribed_radius(const ConvexPolygon& p) {
    std::vector<Point2> pts = p.vertices();
    // Fixed seed keeps the result bit-identical across runs.
    std::mt19937 rng(0x5eed);
    std::shuffle(pts.begin(), pts.end(), rng);
    Circle c{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (c.contains(pts[i])) continue;
        c = {pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (c.contains(pts[j])) continue;
            c = circle_two(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k)
                if (!c.contains(pts[k])) c = circle_three(pts[i], pts[j], pts[k]);
        }
    }
    return {c.r, c.c};
}

ConvexPolygon transform(const ConvexPolygon& p, const Mat2& t, Point2 shift) {
    if (!t.is_orthogonal(1e-10)) throw Error(ErrorKind::NotOrthogonal, "transform matrix is not orthogonal");
    std::vector<Point2> out;
    out.reserve(p.size());
    for (const Point2& v : p.vertices()) out.push_back(t.apply(v) + shift);
    return canonicalize(out);
}

ConvexPolygon translate(const ConvexPolygon& p, Point2 shift) {
    std::vector<Point2> out;
    out.reserve(p.size());
    for (const Point2& v : p.vertices()) out.push_back(v + shift);
    return canonicalize(out);
}

ConvexPolygon scale(const ConvexPolygon& p, double lambda) {
    if (!(lambda >= 0.0)) throw Error(ErrorKind::NegativeScale, "scale factor must be nonnegative");
    if (lambda == 0.0) return ConvexPolygon{};
    std::vector<Point2> out;
    out.reserve(p.size());
    for (const Point2& v : p.vertices()) out.push_back(lambda * v);
    return canonicalize(out);
}

ConvexPolygon regular_polygon(Point2 center, double radius, std::size_t k, double phase) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "regular polygon needs at least one vertex");
    if (!(radius >= 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be nonnegative");
    std::vector<Point2> pts;
    pts.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k) + phase;
        pts.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
    }
    return canonicalize(pts);
}

ConvexPolygon segment(Point2 a, Point2 b) { return canonicalize({a, b}); }

ConvexPolygon point_set(Point2 p) { return canonicalize({p}); }

double max_vertex_norm(const ConvexPolygon& p) {
    double r = 0.0;
    for (const Point2& v : p.vertices()) r = std::max(r, norm(v));
    return r;
}

}  // namespace extdiff
