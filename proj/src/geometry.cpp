#include "stit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stit {

namespace {

double wrap_angle(double phi) {
    phi = std::fmod(phi, kPi);
    if (phi < 0.0) phi += kPi;
    if (phi >= kPi) phi -= kPi;
    return phi;
}

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

LineP::LineP(double phi_, double p_) : phi(wrap_angle(phi_)), p(p_) {
    require(std::isfinite(phi_) && std::isfinite(p_), "LineP: non-finite parameters");
    // wrap_angle folds phi into [0, pi); the signed distance keeps its sign
    // only when the normal is unchanged, so flip p when phi crossed pi.
    double turns = std::floor(phi_ / kPi);
    if (std::fmod(std::abs(turns), 2.0) == 1.0) p = -p_;
}

LineP LineP::through(Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    require(d.norm() > 0.0, "LineP::through: coincident points");
    double phi = std::atan2(d.y, d.x) + kPi / 2.0;  // normal angle
    LineP l(wrap_angle(phi), 0.0);
    l.p = a.dot(l.normal());
    return l;
}

double Segment::direction_angle() const {
    Vec2 d = b - a;
    double th = std::atan2(d.y, d.x);
    if (th < 0.0) th += kPi;
    if (th >= kPi) th -= kPi;
    return th;
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    require(verts_.size() >= 3, "ConvexPolygon: need at least 3 vertices");
    for (const Vec2& v : verts_)
        require(std::isfinite(v.x) && std::isfinite(v.y), "ConvexPolygon: non-finite vertex");
    // convexity and CCW orientation, with a scale-aware slack
    double scale = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        scale = std::max(scale, (verts_[(i + 1) % verts_.size()] - verts_[i]).norm());
    double slack = kGeomEps * std::max(scale, 1.0) * scale;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        Vec2 a = verts_[i];
        Vec2 b = verts_[(i + 1) % verts_.size()];
        Vec2 c = verts_[(i + 2) % verts_.size()];
        require((b - a).cross(c - b) > -slack, "ConvexPolygon: not convex/CCW");
    }
    require(area() > 0.0, "ConvexPolygon: empty interior");
}

ConvexPolygon ConvexPolygon::rectangle(Vec2 lo, Vec2 hi) {
    return ConvexPolygon({{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}});
}

ConvexPolygon ConvexPolygon::square(double side, Vec2 lo) {
    return rectangle(lo, {lo.x + side, lo.y + side});
}

ConvexPolygon ConvexPolygon::regular_ngon(int n, double radius, Vec2 center) {
    require(n >= 3 && radius > 0.0, "regular_ngon: bad parameters");
    std::vector<Vec2> vs;
    vs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * kPi * i / n;
        vs.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    return ConvexPolygon(std::move(vs));
}

double ConvexPolygon::area() const {
    double s = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        s += verts_[i].cross(verts_[(i + 1) % verts_.size()]);
    return 0.5 * s;
}

double ConvexPolygon::perimeter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        s += (verts_[(i + 1) % verts_.size()] - verts_[i]).norm();
    return s;
}

Vec2 ConvexPolygon::centroid() const {
    double a6 = 0.0;
    Vec2 c{0.0, 0.0};
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        Vec2 u = verts_[i], v = verts_[(i + 1) % verts_.size()];
        double w = u.cross(v);
        a6 += w;
        c = c + (u + v) * w;
    }
    return c * (1.0 / (3.0 * a6));
}

double ConvexPolygon::diameter() const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        for (std::size_t j = i + 1; j < verts_.size(); ++j) {
            Vec2 d = verts_[j] - verts_[i];
            d2 = std::max(d2, d.dot(d));
        }
    return std::sqrt(d2);
}

double ConvexPolygon::circumradius() const {
    Vec2 c = centroid();
    double r = 0.0;
    for (const Vec2& v : verts_) r = std::max(r, (v - c).norm());
    return r;
}

std::pair<double, double> ConvexPolygon::support_interval(Vec2 u) const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Vec2& v : verts_) {
        double s = v.dot(u);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return {lo, hi};
}

double ConvexPolygon::width(double phi) const {
    auto [lo, hi] = support_interval({std::cos(phi), std::sin(phi)});
    return hi - lo;
}

bool ConvexPolygon::contains(Vec2 q, double eps) const {
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        Vec2 a = verts_[i], b = verts_[(i + 1) % verts_.size()];
        if ((b - a).cross(q - a) < -eps * (b - a).norm()) return false;
    }
    return true;
}

bool ConvexPolygon::contains(const ConvexPolygon& other, double eps) const {
    for (const Vec2& v : other.vertices())
        if (!contains(v, eps)) return false;
    return true;
}

ConvexPolygon ConvexPolygon::translated(Vec2 shift) const {
    std::vector<Vec2> vs = verts_;
    for (Vec2& v : vs) v = v + shift;
    ConvexPolygon out;
    out.verts_ = std::move(vs);  // geometry unchanged, skip re-validation
    return out;
}

ConvexPolygon ConvexPolygon::scaled(double factor, Vec2 about) const {
    require(factor > 0.0, "scaled: factor must be positive");
    std::vector<Vec2> vs = verts_;
    for (Vec2& v : vs) v = about + (v - about) * factor;
    ConvexPolygon out;
    out.verts_ = std::move(vs);
    return out;
}

ConvexPolygon ConvexPolygon::bounding_box() const {
    auto [x0, x1] = support_interval({1.0, 0.0});
    auto [y0, y1] = support_interval({0.0, 1.0});
    return rectangle({x0, y0}, {x1, y1});
}

std::optional<Segment> clip_line(const ConvexPolygon& poly, const LineP& line, double eps) {
    require(poly.size() >= 3, "clip_line: degenerate polygon");
    auto [lo, hi] = poly.support_interval(line.normal());
    if (line.p <= lo + eps || line.p >= hi - eps) return std::nullopt;  // miss or tangent

    // chord endpoints via the support interval along the line direction of
    // the clipped halfplane pair; robust form: intersect with every edge
    Vec2 d = line.direction();
    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    const auto& vs = poly.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        Vec2 a = vs[i], b = vs[(i + 1) % vs.size()];
        double da = line.signed_distance(a), db = line.signed_distance(b);
        if ((da > 0.0) == (db > 0.0)) continue;
        double t = da / (da - db);
        Vec2 q = a + (b - a) * t;
        double s = (q - line.normal() * line.p).dot(d);
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    if (!(smax - smin > eps)) return std::nullopt;
    return Segment{line.point_at(smin), line.point_at(smax)};
}

std::optional<PolygonSplit> split_polygon(const ConvexPolygon& poly, const LineP& line,
                                          double eps) {
    const auto& vs = poly.vertices();
    const std::size_t n = vs.size();
    std::vector<double> dist(n);
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        dist[i] = line.signed_distance(vs[i]);
        any_pos |= dist[i] > eps;
        any_neg |= dist[i] < -eps;
    }
    require(any_pos || any_neg, "split_polygon: line misses polygon");
    if (!any_pos || !any_neg) throw std::invalid_argument("split_polygon: line misses interior");
    for (double d : dist)
        if (std::abs(d) <= eps) return std::nullopt;  // grazes a vertex; caller resamples

    // Walk the ring once. Invariant: every push appends one vertex together
    // with the parent of the edge leaving it (-1 marking the chord), so the
    // parent arrays stay index-aligned with the child rings.
    std::vector<Vec2> ring[2];
    std::vector<int> par[2];
    Vec2 cross_pt[2];
    int cross_edge[2] = {-1, -1};
    int n_cross = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (i + 1) % n;
        int side = dist[i] > 0.0 ? 0 : 1;
        ring[side].push_back(vs[i]);
        par[side].push_back(static_cast<int>(i));
        if ((dist[i] > 0.0) != (dist[j] > 0.0)) {
            if (n_cross >= 2) return std::nullopt;  // numerically inconsistent, resample
            double t = dist[i] / (dist[i] - dist[j]);
            Vec2 q = vs[i] + (vs[j] - vs[i]) * t;
            cross_pt[n_cross] = q;
            cross_edge[n_cross] = static_cast<int>(i);
            ++n_cross;
            ring[side].push_back(q);
            par[side].push_back(-1);  // the chord leaves q on the side we exit
            ring[1 - side].push_back(q);
            par[1 - side].push_back(static_cast<int>(i));  // q -> vs[j] stays on edge i
        }
    }
    if (n_cross != 2) return std::nullopt;
    if ((cross_pt[1] - cross_pt[0]).norm() <= eps) return std::nullopt;

    PolygonSplit out;
    try {
        out.positive = ConvexPolygon(std::move(ring[0]));
        out.negative = ConvexPolygon(std::move(ring[1]));
    } catch (const std::invalid_argument&) {
        return std::nullopt;  // sliver below tolerance
    }
    out.chord = Segment{cross_pt[0], cross_pt[1]};
    out.chord_end_edge[0] = cross_edge[0];
    out.chord_end_edge[1] = cross_edge[1];
    out.positive_parents = std::move(par[0]);
    out.negative_parents = std::move(par[1]);
    return out;
}

std::optional<SegmentClip> clip_segment(const ConvexPolygon& poly, const Segment& seg,
                                        double eps) {
    // parametric clip of a + t(b-a), t in [0,1], against each boundary halfplane
    const auto& vs = poly.vertices();
    double t0 = 0.0, t1 = 1.0;
    int e0 = -1, e1 = -1;
    Vec2 d = seg.b - seg.a;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        Vec2 a = vs[i], b = vs[(i + 1) % vs.size()];
        Vec2 inward{-(b - a).y, (b - a).x};  // CCW ring: inward normal
        double denom = d.dot(inward);
        double num = (a - seg.a).dot(inward);
        if (std::abs(denom) < eps * inward.norm()) {
            if (num > 0.0) return std::nullopt;  // parallel and outside
            continue;
        }
        double t = num / denom;
        if (denom > 0.0) {  // entering
            if (t > t0) { t0 = t; e0 = static_cast<int>(i); }
        } else {            // leaving
            if (t < t1) { t1 = t; e1 = static_cast<int>(i); }
        }
        if (t0 >= t1) return std::nullopt;
    }
    Segment clipped{seg.a + d * t0, seg.a + d * t1};
    if (clipped.length() <= eps) return std::nullopt;
    return SegmentClip{clipped, t0 > 0.0 ? e0 : -1, t1 < 1.0 ? e1 : -1};
}

std::optional<ConvexPolygon> intersect(const ConvexPolygon& a, const ConvexPolygon& b,
                                       double eps) {
    // successive halfplane clipping of a by the edges of b
    std::vector<Vec2> ring = a.vertices();
    const auto& bs = b.vertices();
    for (std::size_t i = 0; i < bs.size() && !ring.empty(); ++i) {
        Vec2 u = bs[i], v = bs[(i + 1) % bs.size()];
        Vec2 inward{-(v - u).y, (v - u).x};
        std::vector<Vec2> next;
        next.reserve(ring.size() + 1);
        const std::size_t m = ring.size();
        for (std::size_t k = 0; k < m; ++k) {
            Vec2 p = ring[k], q = ring[(k + 1) % m];
            double dp = (p - u).dot(inward), dq = (q - u).dot(inward);
            if (dp >= 0.0) next.push_back(p);
            if ((dp > 0.0) != (dq > 0.0) && dp != dq) {
                double t = dp / (dp - dq);
                next.push_back(p + (q - p) * t);
            }
        }
        ring = std::move(next);
    }
    if (ring.size() < 3) return std::nullopt;
    // drop near-duplicate ring points before validating
    std::vector<Vec2> clean;
    for (const Vec2& p : ring)
        if (clean.empty() || (p - clean.back()).norm() > eps) clean.push_back(p);
    while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= eps) clean.pop_back();
    if (clean.size() < 3) return std::nullopt;
    try {
        ConvexPolygon out(std::move(clean));
        if (out.area() <= eps * eps) return std::nullopt;
        return out;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

double translate_overlap_area(const ConvexPolygon& poly, Vec2 shift) {
    auto o = intersect(poly, poly.translated(shift));
    return o ? o->area() : 0.0;
}

std::optional<ConvexPolygon> erode(const ConvexPolygon& poly, double d) {
    require(d >= 0.0, "erode: negative distance");
    if (d == 0.0) return poly;
    std::vector<Vec2> ring = poly.vertices();
    const auto& vs = poly.vertices();
    for (std::size_t i = 0; i < vs.size() && ring.size() >= 3; ++i) {
        Vec2 u = vs[i], v = vs[(i + 1) % vs.size()];
        Vec2 e = v - u;
        Vec2 inward{-e.y / e.norm(), e.x / e.norm()};
        Vec2 anchor = u + inward * d;
        std::vector<Vec2> next;
        const std::size_t m = ring.size();
        for (std::size_t k = 0; k < m; ++k) {
            Vec2 p = ring[k], q = ring[(k + 1) % m];
            double dp = (p - anchor).dot(inward), dq = (q - anchor).dot(inward);
            if (dp >= 0.0) next.push_back(p);
            if ((dp > 0.0) != (dq > 0.0) && dp != dq) next.push_back(p + (q - p) * (dp / (dp - dq)));
        }
        ring = std::move(next);
    }
    if (ring.size() < 3) return std::nullopt;
    try {
        ConvexPolygon out(std::move(ring));
        if (out.area() <= 0.0) return std::nullopt;
        return out;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

ConvexPolygon convex_hull(std::vector<Vec2> points) {
    require(points.size() >= 3, "convex_hull: need at least 3 points");
    std::sort(points.begin(), points.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
                 points.end());
    const std::size_t n = points.size();
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(points[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    for (std::size_t i = n - 1, lo = k + 1; i-- > 0;) {  // upper
        while (k >= lo && (hull[k - 1] - hull[k - 2]).cross(points[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k > 0 ? k - 1 : 0);
    return ConvexPolygon(std::move(hull));
}

double set_covariance_disk(double R, double r) {
    if (!(R > 0.0) || r < 0.0 || r > 2.0 * R)
        throw std::invalid_argument("set_covariance_disk: need 0 <= r <= 2R");
    double q = r / (2.0 * R);
    return 2.0 * R * R * std::acos(q) - 0.5 * r * std::sqrt(4.0 * R * R - r * r);
}

double isotropized_set_covariance(const ConvexPolygon& poly, double r, int n_angles) {
    if (r < 0.0) throw std::invalid_argument("isotropized_set_covariance: r < 0");
    if (n_angles < 4) throw std::invalid_argument("isotropized_set_covariance: n_angles < 4");
    if (r == 0.0) return poly.area();
    if (r >= poly.diameter()) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < n_angles; ++i) {
        double th = 2.0 * kPi * (i + 0.5) / n_angles;
        acc += translate_overlap_area(poly, {r * std::cos(th), r * std::sin(th)});
    }
    return acc / n_angles;
}

} // namespace stit
