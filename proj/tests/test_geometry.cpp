#include "doctest.h"

#include <cmath>

#include "stit/geometry.hpp"
#include "stit/rng.hpp"

using namespace stit;

namespace {

// brute-force chord oracle: intersect the line with every polygon edge
double chord_length_oracle(const ConvexPolygon& poly, const LineP& line) {
    std::vector<Vec2> hits;
    const auto& vs = poly.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        Vec2 a = vs[i], b = vs[(i + 1) % vs.size()];
        double da = line.signed_distance(a), db = line.signed_distance(b);
        if (da * db > 0.0) continue;
        if (da == db) continue;
        double t = da / (da - db);
        hits.push_back(a + (b - a) * t);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < hits.size(); ++i)
        for (std::size_t j = i + 1; j < hits.size(); ++j)
            best = std::max(best, (hits[j] - hits[i]).norm());
    return best;
}

ConvexPolygon random_polygon(Rng& rng) {
    int n = 3 + static_cast<int>(rng.index(6));
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * kPi * (i + 0.3 * rng.uniform()) / n;
        double r = 0.4 + 0.6 * rng.uniform();
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return convex_hull(pts);
}

} // namespace

TEST_CASE("clip_line on the unit square") {
    auto sq = ConvexPolygon::square(1.0);
    auto chord = clip_line(sq, LineP(0.0, 0.5));
    REQUIRE(chord.has_value());
    CHECK(chord->length() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chord->a.x == doctest::Approx(0.5));
    CHECK(chord->b.x == doctest::Approx(0.5));

    CHECK_FALSE(clip_line(sq, LineP(0.0, 2.0)).has_value());
    CHECK_FALSE(clip_line(sq, LineP(0.0, 1.0)).has_value());  // tangent edge
}

TEST_CASE("clip_line matches the brute-force oracle") {
    auto hex = ConvexPolygon::regular_ngon(6, 1.0);
    auto chord = clip_line(hex, LineP(0.0, 0.0));
    REQUIRE(chord.has_value());
    CHECK(chord->length() == doctest::Approx(chord_length_oracle(hex, LineP(0.0, 0.0))));

    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        auto poly = random_polygon(rng);
        LineP line(rng.uniform() * kPi, rng.uniform(-0.8, 0.8));
        auto got = clip_line(poly, line);
        double want = chord_length_oracle(poly, line);
        if (got) {
            CHECK(got->length() == doctest::Approx(want).epsilon(1e-9));
        } else {
            CHECK(want <= 1e-6);
        }
    }
}

TEST_CASE("split_polygon basics and area additivity") {
    auto sq = ConvexPolygon::square(1.0);
    auto s = split_polygon(sq, LineP(0.0, 0.5));
    REQUIRE(s.has_value());
    CHECK(s->positive.area() == doctest::Approx(0.5));
    CHECK(s->negative.area() == doctest::Approx(0.5));
    CHECK(s->chord.length() == doctest::Approx(1.0));
    // chord endpoints on bottom (0) and top (2) boundary edges
    int lo = std::min(s->chord_end_edge[0], s->chord_end_edge[1]);
    int hi = std::max(s->chord_end_edge[0], s->chord_end_edge[1]);
    CHECK(lo == 0);
    CHECK(hi == 2);

    auto d = split_polygon(sq, LineP::through({0.2, 0.0}, {0.8, 1.0}));
    REQUIRE(d.has_value());
    CHECK(d->positive.area() + d->negative.area() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(split_polygon(sq, LineP(0.0, 5.0)), std::invalid_argument);

    Rng rng(99);
    for (int i = 0; i < 500; ++i) {
        auto poly = random_polygon(rng);
        LineP line(rng.uniform() * kPi, rng.uniform(-0.5, 0.5));
        std::optional<PolygonSplit> sp;
        try {
            sp = split_polygon(poly, line);
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (!sp) continue;
        double sum = sp->positive.area() + sp->negative.area();
        CHECK(std::abs(sum - poly.area()) <= 1e-9 * poly.area());

        // provenance: every child edge lies on its parent edge (or on the
        // cutting line when marked as the chord)
        auto check_child = [&](const ConvexPolygon& child, const std::vector<int>& parents) {
            REQUIRE(parents.size() == child.size());
            for (std::size_t k = 0; k < child.size(); ++k) {
                Vec2 a = child.vertex(k), b = child.vertex(k + 1);
                if (parents[k] < 0) {
                    CHECK(std::abs(line.signed_distance(a)) < 1e-9);
                    CHECK(std::abs(line.signed_distance(b)) < 1e-9);
                } else {
                    Vec2 pa = poly.vertex(static_cast<std::size_t>(parents[k]));
                    Vec2 pb = poly.vertex(static_cast<std::size_t>(parents[k]) + 1);
                    Vec2 d = pb - pa;
                    CHECK(std::abs(d.cross(a - pa)) < 1e-9 * d.norm());
                    CHECK(std::abs(d.cross(b - pa)) < 1e-9 * d.norm());
                }
            }
        };
        check_child(sp->positive, sp->positive_parents);
        check_child(sp->negative, sp->negative_parents);
        // chord endpoints sit on their reported parent edges
        for (int k = 0; k < 2; ++k) {
            Vec2 q = k == 0 ? sp->chord.a : sp->chord.b;
            Vec2 pa = poly.vertex(static_cast<std::size_t>(sp->chord_end_edge[k]));
            Vec2 pb = poly.vertex(static_cast<std::size_t>(sp->chord_end_edge[k]) + 1);
            Vec2 d = pb - pa;
            CHECK(std::abs(d.cross(q - pa)) < 1e-9 * d.norm());
        }
    }
}

TEST_CASE("width examples and invariances") {
    auto sq = ConvexPolygon::square(1.0);
    CHECK(sq.width(0.0) == doctest::Approx(1.0));
    CHECK(sq.width(kPi / 4.0) == doctest::Approx(std::sqrt(2.0)));

    auto disk = ConvexPolygon::regular_ngon(64, 1.0);
    for (double phi : {0.1, 0.9, 2.2}) {
        CHECK(disk.width(phi) == doctest::Approx(2.0).epsilon(0.005));
        // support-function oracle
        double lo = 1e9, hi = -1e9;
        for (const auto& v : disk.vertices()) {
            double s = v.x * std::cos(phi) + v.y * std::sin(phi);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        CHECK(disk.width(phi) == doctest::Approx(hi - lo));
    }

    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        auto poly = random_polygon(rng);
        double phi = rng.uniform() * kPi;
        Vec2 shift{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK(poly.width(phi) == doctest::Approx(poly.translated(shift).width(phi)));
        CHECK(poly.width(phi) == doctest::Approx(poly.width(phi + kPi)));
    }
}

TEST_CASE("perimeter and area") {
    auto sq = ConvexPolygon::square(1.0);
    CHECK(sq.perimeter() == doctest::Approx(4.0));
    CHECK(sq.area() == doctest::Approx(1.0));

    auto tri = ConvexPolygon({{0, 0}, {1, 0}, {0, 1}});
    CHECK(tri.perimeter() == doctest::Approx(2.0 + std::sqrt(2.0)));
    CHECK(tri.area() == doctest::Approx(0.5));

    auto disk = ConvexPolygon::regular_ngon(256, 1.0);
    CHECK(disk.perimeter() == doctest::Approx(2.0 * kPi).epsilon(0.001));
    CHECK(disk.area() == doctest::Approx(kPi).epsilon(0.001));
}

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0, 1}, {1, 0}}), std::invalid_argument);  // CW
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0.6, 0.5}}), std::invalid_argument);
}

TEST_CASE("disk set covariance") {
    CHECK(set_covariance_disk(1.0, 0.0) == doctest::Approx(kPi));
    CHECK(set_covariance_disk(1.0, 2.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(set_covariance_disk(1.0, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(set_covariance_disk(1.0, -0.1), std::invalid_argument);

    // Monte Carlo intersection-area oracle for two unit disks at distance 1
    Rng rng(42);
    const std::size_t n = 400000;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 p{rng.uniform(-1.0, 2.0), rng.uniform(-1.0, 1.0)};
        Vec2 q{p.x - 1.0, p.y};
        if (p.dot(p) <= 1.0 && q.dot(q) <= 1.0) ++inside;
    }
    double box = 6.0;
    double frac = static_cast<double>(inside) / n;
    double est = frac * box;
    double se = box * std::sqrt(frac * (1.0 - frac) / n);
    double want = set_covariance_disk(1.0, 1.0);
    CHECK(want == doctest::Approx(2.0 * std::acos(0.5) - 0.5 * std::sqrt(3.0)));
    CHECK(std::abs(est - want) < 3.0 * se);
}

TEST_CASE("isotropized set covariance of a polygon") {
    auto sq = ConvexPolygon::square(1.0);
    CHECK(isotropized_set_covariance(sq, 0.0, 64) == doctest::Approx(1.0));
    CHECK(isotropized_set_covariance(sq, 1.5, 64) == doctest::Approx(0.0));

    // MC oracle: random direction + point-in-both test
    Rng rng(7);
    const std::size_t n = 400000;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double th = rng.uniform() * 2.0 * kPi;
        Vec2 v{0.5 * std::cos(th), 0.5 * std::sin(th)};
        Vec2 p{rng.uniform(), rng.uniform()};
        Vec2 q = p - v;
        if (q.x >= 0 && q.x <= 1 && q.y >= 0 && q.y <= 1) ++hit;
    }
    double frac = static_cast<double>(hit) / n;
    double se = std::sqrt(frac * (1.0 - frac) / n);
    double got = isotropized_set_covariance(sq, 0.5, 512);
    CHECK(std::abs(got - frac) < 3.0 * se);

    // monotone non-increasing in r
    double prev = 1.0;
    for (double r = 0.05; r < 1.45; r += 0.05) {
        double v = isotropized_set_covariance(sq, r, 128);
        CHECK(v <= prev + 1e-9);
        prev = v;
    }
}

TEST_CASE("segment clipping provenance") {
    auto sq = ConvexPolygon::square(1.0);
    auto c = clip_segment(sq, Segment{{-1.0, 0.5}, {2.0, 0.5}});
    REQUIRE(c.has_value());
    CHECK(c->seg.length() == doctest::Approx(1.0));
    CHECK(c->entry_edge == 3);  // left edge
    CHECK(c->exit_edge == 1);   // right edge

    auto inside = clip_segment(sq, Segment{{0.2, 0.2}, {0.8, 0.8}});
    REQUIRE(inside.has_value());
    CHECK(inside->entry_edge == -1);
    CHECK(inside->exit_edge == -1);

    CHECK_FALSE(clip_segment(sq, Segment{{2.0, 2.0}, {3.0, 3.0}}).has_value());
}

TEST_CASE("convex intersection") {
    auto a = ConvexPolygon::square(1.0);
    auto b = ConvexPolygon::square(1.0, {0.5, 0.5});
    auto c = intersect(a, b);
    REQUIRE(c.has_value());
    CHECK(c->area() == doctest::Approx(0.25));
    CHECK_FALSE(intersect(a, ConvexPolygon::square(1.0, {5.0, 5.0})).has_value());
    CHECK(translate_overlap_area(a, {0.25, 0.0}) == doctest::Approx(0.75));
}
