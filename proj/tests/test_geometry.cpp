#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pq/geometry.hpp"
#include "pq/rng.hpp"

using namespace pq;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("line through points and distances") {
    Line l = Line::through_points({0.0, 1.0}, {1.0, 1.0}); // y = 1
    CHECK(std::abs(distance_point_line({0.5, 3.0}, l) - 2.0) <= 1e-15);
    CHECK(std::abs(l.signed_distance({0.0, 1.0})) <= 1e-15);
    Point foot = project_point_line({2.0, 5.0}, l);
    CHECK(std::abs(foot.x - 2.0) <= 1e-15);
    CHECK(std::abs(foot.y - 1.0) <= 1e-15);
    CHECK_THROWS_WITH(Line::through_points({1.0, 2.0}, {1.0, 2.0}),
                      ContainsSubstring("degenerate line"));
}

TEST_CASE("line normalization is irrelevant to the locus") {
    Line a = Line::from_normal_offset({3.0, 4.0}, 10.0);
    Line b = Line::from_normal_offset({-6.0, -8.0}, -20.0);
    Rng rng = Rng::substream(5, 0);
    for (int i = 0; i < 50; ++i) {
        Point p{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
        CHECK(std::abs(distance_point_line(p, a) - distance_point_line(p, b)) <= 1e-12);
    }
    CHECK(a.same_line(b));
}

TEST_CASE("intersect lines") {
    Line a = Line::through_points({0.0, 0.0}, {1.0, 1.0});
    Line b = Line::through_points({0.0, 1.0}, {1.0, 0.0});
    Point p = intersect_lines(a, b);
    CHECK(std::abs(p.x - 0.5) <= 1e-15);
    CHECK(std::abs(p.y - 0.5) <= 1e-15);
    Line c = Line::through_points({0.0, 2.0}, {1.0, 3.0});
    CHECK_THROWS_WITH(intersect_lines(a, c), ContainsSubstring("parallel lines"));
}

TEST_CASE("tangent length") {
    Circle k{{0.0, 0.0}, 1.0};
    CHECK(std::abs(tangent_length({2.0, 0.0}, k) - std::sqrt(3.0)) <= 1e-15);
    CHECK(tangent_length({1.0, 0.0}, k) == 0.0);
    CHECK_THROWS_WITH(tangent_length({0.5, 0.0}, k), ContainsSubstring("point inside circle"));
    // Pythagoras: t^2 + r^2 = |p - center|^2 for random outside points.
    Rng rng = Rng::substream(6, 0);
    for (int i = 0; i < 100; ++i) {
        Circle c{{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)}, rng.uniform(0.5, 2.0)};
        double rho = c.radius * rng.uniform(1.0, 4.0);
        double theta = rng.angle();
        Point p = c.center + Vec2{rho * std::cos(theta), rho * std::sin(theta)};
        double t = tangent_length(p, c);
        CHECK(std::abs(t * t + c.radius * c.radius - norm2(p - c.center)) <=
              1e-12 * norm2(p - c.center));
    }
}

TEST_CASE("circle through three points") {
    Circle k = circle_through_three({1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0});
    CHECK(std::abs(k.center.x) <= 1e-14);
    CHECK(std::abs(k.center.y) <= 1e-14);
    CHECK(std::abs(k.radius - 1.0) <= 1e-14);
    CHECK_THROWS_WITH(circle_through_three({0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}),
                      ContainsSubstring("degenerate circle"));
}

TEST_CASE("concyclicity residual") {
    double r = std::sqrt(2.0) / 2.0;
    CHECK(concyclicity_residual({r, r}, {-r, r}, {-r, -r}, {r, -r}) <= 1e-14);
    CHECK(concyclicity_residual({1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {2.0, 0.0}) > 0.5);
    // Invariance under argument rotation of the first three.
    Rng rng = Rng::substream(7, 0);
    for (int i = 0; i < 50; ++i) {
        Circle c{{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}, rng.uniform(0.5, 2.0)};
        Point p = c.at_angle(rng.angle()), q = c.at_angle(rng.angle()),
              s = c.at_angle(rng.angle());
        Point off = c.center + (1.0 + rng.uniform(0.1, 1.0)) * (c.at_angle(rng.angle()) - c.center);
        if (collinearity_residual(p, q, s) < 1e-3) continue;
        double r1 = concyclicity_residual(p, q, s, off);
        double r2 = concyclicity_residual(s, p, q, off);
        CHECK(std::abs(r1 - r2) <= 1e-9 * std::max(1.0, r1));
    }
}

TEST_CASE("circle fit recovers exact circles") {
    Rng rng = Rng::substream(8, 0);
    for (int i = 0; i < 50; ++i) {
        Circle c{{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)}, rng.uniform(0.5, 3.0)};
        std::vector<Point> pts;
        for (int j = 0; j < 8; ++j) pts.push_back(c.at_angle(rng.angle()));
        // Guard against clustered samples making the fit singular.
        double spread = 0.0;
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = a + 1; b < pts.size(); ++b)
                spread = std::max(spread, distance(pts[a], pts[b]));
        if (spread < c.radius) continue;
        Circle fit = fit_circle(pts);
        CHECK(distance(fit.center, c.center) <= 1e-9 * c.radius);
        CHECK(std::abs(fit.radius - c.radius) <= 1e-9 * c.radius);
    }
}

TEST_CASE("affine maps compose, invert, and act on points") {
    AffineMap a = AffineMap::rotation(0.7);
    a.t = {1.0, -2.0};
    AffineMap b = AffineMap::linear(2.0, 1.0, 0.0, 1.5);
    b.t = {-0.5, 3.0};
    AffineMap ab = compose(a, b);
    Point p{0.3, -1.1};
    Point q1 = a(b(p));
    Point q2 = ab(p);
    CHECK(distance(q1, q2) <= 1e-14);
    AffineMap inv = inverse(ab);
    CHECK(distance(inv(q2), p) <= 1e-12);
    AffineMap sing = AffineMap::linear(1.0, 2.0, 2.0, 4.0);
    CHECK_THROWS_WITH(inverse(sing), ContainsSubstring("singular affine map"));
}

TEST_CASE("signed ratio along a segment") {
    Point a{0.0, 0.0}, b{2.0, 0.0};
    CHECK(std::abs(signed_ratio(a, b, {1.0, 0.0}) - 1.0) <= 1e-15);  // midpoint
    CHECK(std::abs(signed_ratio(a, b, {4.0, 0.0}) + 2.0) <= 1e-15);  // beyond b
    CHECK(std::abs(signed_ratio(a, b, {-2.0, 0.0}) + 0.5) <= 1e-15); // before a
    CHECK_THROWS_WITH(signed_ratio(a, b, b), ContainsSubstring("ratio undefined"));
}
