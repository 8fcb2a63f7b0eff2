#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace extdiff {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 p);

/// Row-major 2x2 matrix.
struct Mat2 {
    double a00 = 1.0, a01 = 0.0;
    double a10 = 0.0, a11 = 1.0;

    static Mat2 identity() { return {}; }
    static Mat2 rotation(double angle);
    static Mat2 reflection_x();  // (x, y) -> (-x, y)

    Point2 apply(Point2 p) const { return {a00 * p.x + a01 * p.y, a10 * p.x + a11 * p.y}; }
    Mat2 transposed() const { return {a00, a10, a01, a11}; }
    friend Mat2 operator*(const Mat2& l, const Mat2& r);
    bool is_orthogonal(double tol = 1e-10) const;
};

/// Compact convex set in the plane stored by its vertices.
///
/// Always canonical: counter-clockwise, no duplicate or collinear vertices,
/// lexicographic minimum (x, then y) first. A single vertex is a point and two
/// vertices are a segment. Construct through canonicalize().
class ConvexPolygon {
public:
    /// The origin point.
    ConvexPolygon() : vertices_{Point2{}} {}

    const std::vector<Point2>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    bool is_point() const noexcept { return vertices_.size() == 1; }
    bool is_segment() const noexcept { return vertices_.size() == 2; }

    friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

private:
    explicit ConvexPolygon(std::vector<Point2> v) : vertices_(std::move(v)) {}
    friend ConvexPolygon canonicalize(std::span<const Point2> points);

    std::vector<Point2> vertices_;
};

struct Ball2 {
    Point2 center;
    double radius = 0.0;
};

struct Interval1 {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    friend bool operator==(const Interval1&, const Interval1&) = default;
};

struct RadiusResult {
    double radius = 0.0;
    Point2 center;
};

/// Cross products at or below this magnitude count as collinear.
inline constexpr double kCollinearEps = 1e-12;

ConvexPolygon canonicalize(std::span<const Point2> points);
inline ConvexPolygon canonicalize(std::initializer_list<Point2> points) {
    return canonicalize(std::span<const Point2>(points.begin(), points.size()));
}

double support(const ConvexPolygon& p, Point2 u);
ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q);

/// Distance from a point to a convex polygon (0 inside).
double distance_to(const ConvexPolygon& p, Point2 z);
double hausdorff(const ConvexPolygon& p, const ConvexPolygon& q);

RadiusResult inscribed_radius(const ConvexPolygon& p);
RadiusResult circumscribed_radius(const ConvexPolygon& p);

ConvexPolygon transform(const ConvexPolygon& p, const Mat2& t, Point2 shift = {});
ConvexPolygon translate(const ConvexPolygon& p, Point2 shift);
ConvexPolygon scale(const ConvexPolygon& p, double lambda);

/// Regular k-gon with vertices at center + r (cos(2 pi j / k + phase), sin(...)).
ConvexPolygon regular_polygon(Point2 center, double radius, std::size_t k, double phase = 0.0);
ConvexPolygon segment(Point2 a, Point2 b);
ConvexPolygon point_set(Point2 p);

/// Largest distance of a vertex from the origin (Lipschitz constant of the support function).
double max_vertex_norm(const ConvexPolygon& p);

}  // namespace extdiff
