#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace stit {

// Module-wide geometric tolerance, in window units. Tangential contacts are
// measure-zero events; callers resample when an operation reports one.
inline constexpr double kGeomEps = 1e-9;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

using Point = Vec2;

// Line in Hesse normal form: {q : q . (cos phi, sin phi) = p}, phi in [0, pi).
struct LineP {
    double phi = 0.0;
    double p = 0.0;

    LineP() = default;
    LineP(double phi_, double p_);

    Vec2 normal() const { return {std::cos(phi), std::sin(phi)}; }
    // unit vector along the line
    Vec2 direction() const { return {-std::sin(phi), std::cos(phi)}; }
    Vec2 point_at(double s) const { return normal() * p + direction() * s; }
    double signed_distance(Vec2 q) const { return q.dot(normal()) - p; }

    // line through two distinct points
    static LineP through(Vec2 a, Vec2 b);
};

struct Segment {
    Vec2 a, b;

    Segment() = default;
    Segment(Vec2 a_, Vec2 b_) : a(a_), b(b_) {}

    double length() const { return (b - a).norm(); }
    Vec2 midpoint() const { return (a + b) * 0.5; }
    // direction angle of the segment in [0, pi)
    double direction_angle() const;
};

// Convex polygon with counterclockwise vertices and non-empty interior.
class ConvexPolygon {
  public:
    ConvexPolygon() = default;
    // Validates orientation and convexity (up to tolerance); throws
    // std::invalid_argument on fewer than 3 vertices, clockwise order or a
    // reflex corner.
    explicit ConvexPolygon(std::vector<Vec2> vertices);

    static ConvexPolygon rectangle(Vec2 lo, Vec2 hi);
    static ConvexPolygon square(double side, Vec2 lo = {0.0, 0.0});
    static ConvexPolygon regular_ngon(int n, double radius, Vec2 center = {0.0, 0.0});

    const std::vector<Vec2>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    Vec2 vertex(std::size_t i) const { return verts_[i % verts_.size()]; }

    double area() const;
    double perimeter() const;
    Vec2 centroid() const;
    double diameter() const;
    // radius of the smallest centroid-centered disk containing the polygon
    double circumradius() const;

    // support interval [lo, hi] of q . u over the polygon, u a unit vector
    std::pair<double, double> support_interval(Vec2 u) const;
    // width in normal direction phi
    double width(double phi) const;

    bool contains(Vec2 q, double eps = kGeomEps) const;
    // true when every vertex of other lies inside this polygon
    bool contains(const ConvexPolygon& other, double eps = kGeomEps) const;

    ConvexPolygon translated(Vec2 shift) const;
    ConvexPolygon scaled(double factor, Vec2 about = {0.0, 0.0}) const;
    ConvexPolygon bounding_box() const;

  private:
    std::vector<Vec2> verts_;
};

// L cap poly, or nullopt when the line misses the interior (tangential
// contact counts as a miss).
std::optional<Segment> clip_line(const ConvexPolygon& poly, const LineP& line,
                                 double eps = kGeomEps);

// Split of a convex polygon by a line crossing its interior, with enough
// provenance for the MNW bookkeeping: each chord endpoint reports the index
// of the parent boundary edge it lies on, and each child polygon reports,
// per boundary edge, the parent edge it came from (-1 for the chord).
struct PolygonSplit {
    ConvexPolygon positive;             // side with signed_distance > 0
    ConvexPolygon negative;
    Segment chord;
    int chord_end_edge[2] = {-1, -1};   // parent edge carrying chord.a / chord.b
    std::vector<int> positive_parents;  // per edge of `positive`
    std::vector<int> negative_parents;
};

// Returns nullopt when the cut is tangential or grazes a vertex within eps;
// throws std::invalid_argument when the line misses the interior entirely.
std::optional<PolygonSplit> split_polygon(const ConvexPolygon& poly, const LineP& line,
                                          double eps = kGeomEps);

// seg cap poly. When the result is cut by the polygon boundary, entry_edge /
// exit_edge give the boundary edge index that cut the a / b end (-1 when the
// original endpoint was already inside).
struct SegmentClip {
    Segment seg;
    int entry_edge = -1;
    int exit_edge = -1;
};
std::optional<SegmentClip> clip_segment(const ConvexPolygon& poly, const Segment& seg,
                                        double eps = kGeomEps);

// Intersection of two convex polygons (empty optional when the overlap has
// no interior).
std::optional<ConvexPolygon> intersect(const ConvexPolygon& a, const ConvexPolygon& b,
                                       double eps = kGeomEps);

// Area(W cap (W + shift))
double translate_overlap_area(const ConvexPolygon& poly, Vec2 shift);

// Convex hull (monotone chain); throws when the hull is degenerate.
ConvexPolygon convex_hull(std::vector<Vec2> points);

// Inward offset (Minkowski erosion) of a convex polygon; nullopt when the
// polygon vanishes.
std::optional<ConvexPolygon> erode(const ConvexPolygon& poly, double d);

// Isotropized set covariance of a disk of radius R:
//   2 R^2 arccos(r / 2R) - (r/2) sqrt(4R^2 - r^2),  0 <= r <= 2R.
double set_covariance_disk(double R, double r);

// Isotropized set covariance of a polygon, averaged over n_angles equispaced
// directions (midpoint rule on the circle).
double isotropized_set_covariance(const ConvexPolygon& poly, double r, int n_angles);

} // namespace stit
