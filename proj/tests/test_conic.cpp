#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pq/conic.hpp"
#include "pq/rng.hpp"

using namespace pq;
using Catch::Matchers::MessageMatches;
using Catch::Matchers::ContainsSubstring;

namespace {

const double SQ2 = std::sqrt(2.0);
const double SQ3 = std::sqrt(3.0);
const double SQ5 = std::sqrt(5.0);
const double SQ6 = std::sqrt(6.0);

Conic unit_circle() {
    return Conic::from_coefficients(1, 0, 1, 0, 0, -1, Point{0, 0});
}

// x^2 + y - 5/4 = 0, opens downward, vertex (0, 5/4)
Conic par_down() {
    return Conic::from_coefficients(1, 0, 0, 0, 1, -1.25, Point{0, 0});
}

// y^2 + x - 5/4 = 0, opens leftward, vertex (5/4, 0)
Conic par_left() {
    return Conic::from_coefficients(0, 0, 1, 1, 0, -1.25, Point{0, 0});
}

bool near_pt(Point a, Point b, double tol = 1e-9) { return distance(a, b) <= tol; }

} // namespace

TEST_CASE("conic normalization and witness sign") {
    Conic k = unit_circle();
    CHECK(k.a == Catch::Approx(1.0 / SQ2).margin(1e-15));
    CHECK(k.c == Catch::Approx(1.0 / SQ2).margin(1e-15));
    CHECK(k.f == Catch::Approx(-1.0 / SQ2).margin(1e-15));
    CHECK(k.evaluate({0, 0}) < 0.0);

    Conic flipped = Conic::from_coefficients(-3, 0, -3, 0, 0, 3, Point{0, 0});
    CHECK(flipped.a == Catch::Approx(k.a).margin(1e-15));
    CHECK(flipped.f == Catch::Approx(k.f).margin(1e-15));

    Conic scaled = Conic::from_coefficients(7, 0, 7, 0, 0, -7);
    CHECK(scaled.a == Catch::Approx(k.a).margin(1e-15));

    CHECK_THROWS_MATCHES(Conic::from_coefficients(0, 0, 0, 0, 0, 0), Error,
                         MessageMatches(ContainsSubstring("all coefficients vanish")));
    CHECK_THROWS_MATCHES(Conic::from_coefficients(0, 0, 0, 1, 1, 1), Error,
                         MessageMatches(ContainsSubstring("quadratic part vanishes")));
}

TEST_CASE("conic classification table") {
    auto cls = [](double a, double b, double c, double d, double e, double f) {
        return classify(Conic::from_coefficients(a, b, c, d, e, f));
    };
    CHECK(cls(1, 0, 1, 0, 0, -1) == ConicClass::ellipse);
    CHECK(cls(4, 0, 9, 0, 0, -36) == ConicClass::ellipse);
    CHECK(cls(1, 0, 1, 0, 0, 1) == ConicClass::empty);
    CHECK(cls(1, 0, 1, 0, 0, 0) == ConicClass::point);
    CHECK(cls(1, 0, 0, 0, -1, 0) == ConicClass::parabola);
    CHECK(cls(0, 0, 1, 1, 0, -1.25) == ConicClass::parabola);
    CHECK(cls(0, 1, 0, 0, 0, -1) == ConicClass::hyperbola);
    CHECK(cls(1, 0, -1, 0, 0, 1) == ConicClass::hyperbola);
    CHECK(cls(1, 0, -1, 0, 0, 0) == ConicClass::intersecting_lines);
    CHECK(cls(1, 0, 0, 0, 0, -1) == ConicClass::parallel_lines);
    CHECK(cls(1, 0, 0, 0, 0, 0) == ConicClass::double_line);
    CHECK(cls(1, 0, 0, 0, 0, 1) == ConicClass::empty);
    CHECK(is_degenerate(ConicClass::point));
    CHECK(is_degenerate(ConicClass::double_line));
    CHECK_FALSE(is_degenerate(ConicClass::parabola));
    CHECK_FALSE(is_degenerate(ConicClass::ellipse));
}

TEST_CASE("parabola frame extraction") {
    ParabolaFrame f1 = frame_from_conic(par_down());
    CHECK(near_pt(f1.vertex, {0.0, 1.25}, 1e-12));
    CHECK(near_pt(Point{f1.axis.x, f1.axis.y}, {0.0, -1.0}, 1e-12));
    CHECK(f1.focal == Catch::Approx(0.25).margin(1e-12));

    ParabolaFrame f2 = frame_from_conic(par_left());
    CHECK(near_pt(f2.vertex, {1.25, 0.0}, 1e-12));
    CHECK(near_pt(Point{f2.axis.x, f2.axis.y}, {-1.0, 0.0}, 1e-12));
    CHECK(f2.focal == Catch::Approx(0.25).margin(1e-12));

    Conic up = Conic::from_coefficients(1, 0, 0, 0, -1, 0, Point{0, 1});
    ParabolaFrame f3 = frame_from_conic(up);
    CHECK(near_pt(f3.vertex, {0.0, 0.0}, 1e-12));
    CHECK(near_pt(Point{f3.axis.x, f3.axis.y}, {0.0, 1.0}, 1e-12));
    CHECK(f3.focal == Catch::Approx(0.25).margin(1e-12));
    CHECK(near_pt(f3.focus(), {0.0, 0.25}, 1e-12));

    CHECK_THROWS_MATCHES(frame_from_conic(unit_circle()), Error,
                         MessageMatches(ContainsSubstring("not a parabola")));
}

TEST_CASE("frame to conic round trip") {
    Rng rng{914>>1};
    for (int trial = 0; trial < 200; ++trial) {
        Rng r = Rng::substream(0xF0A1u + trial, trial);
        ParabolaFrame fr;
        fr.vertex = {r.uniform(-5, 5), r.uniform(-5, 5)};
        double th = r.angle();
        fr.axis = {std::cos(th), std::sin(th)};
        fr.focal = r.uniform(0.05, 3.0);
        Conic q = conic_from_frame(fr);
        CHECK(classify(q) == ConicClass::parabola);
        ParabolaFrame back = frame_from_conic(q);
        CHECK(near_pt(back.vertex, fr.vertex, 1e-8));
        CHECK(std::abs(cross(back.axis, fr.axis)) < 1e-10);
        CHECK(dot(back.axis, fr.axis) > 0.0);
        CHECK(back.focal == Catch::Approx(fr.focal).epsilon(1e-9));
        // points on the frame satisfy the implicit equation
        for (double w : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
            Point p = fr.point_at(w);
            CHECK(std::abs(q.evaluate(p)) < 1e-9 * (1.0 + norm2(p)));
            CHECK(fr.abscissa_of(p) == Catch::Approx(w).margin(1e-12));
            CHECK(fr.on_curve_residual(p) < 1e-12);
        }
        // the focus is on the inside
        CHECK(q.evaluate(fr.focus()) < 0.0);
    }
}

TEST_CASE("frame abscissa parametrization on y = x^2") {
    Conic up = Conic::from_coefficients(1, 0, 0, 0, -1, 0, Point{0, 1});
    ParabolaFrame fr = frame_from_conic(up);
    // abscissa of the point with x-coordinate t has magnitude |t|
    Point p{2.0, 4.0};
    CHECK(std::abs(fr.abscissa_of(p)) == Catch::Approx(2.0).margin(1e-12));
    CHECK(fr.ordinate_of(p) == Catch::Approx(4.0).margin(1e-12));
    CHECK(fr.slope_coefficient() == Catch::Approx(1.0).margin(1e-12));
    CHECK(near_pt(fr.point_at(fr.abscissa_of(p)), p, 1e-12));
}

TEST_CASE("chord slope in axis frame") {
    Conic up = Conic::from_coefficients(1, 0, 0, 0, -1, 0, Point{0, 1});
    ParabolaFrame fr = frame_from_conic(up);
    Point p{1.0, 1.0}, q{2.0, 4.0};
    double s = slope_in_axis_frame(fr, p, q);
    // chord direction is parallel to across + s * axis
    Vec2 dir = q - p;
    Vec2 model = fr.across() + s * fr.axis;
    CHECK(std::abs(cross(dir, model)) < 1e-12 * norm(dir) * norm(model));
    CHECK(std::abs(s) == Catch::Approx(3.0).margin(1e-12));

    // symmetric chord is perpendicular to the axis
    double s0 = slope_in_axis_frame(fr, Point{-1.5, 2.25}, Point{1.5, 2.25});
    CHECK(std::abs(s0) < 1e-12);

    CHECK_THROWS_MATCHES(slope_in_axis_frame(fr, Point{1, 2}, q), Error,
                         MessageMatches(ContainsSubstring("point not on parabola")));
    CHECK_THROWS_MATCHES(slope_in_axis_frame(fr, p, p), Error,
                         MessageMatches(ContainsSubstring("coincident points")));
}

TEST_CASE("tangent lines") {
    Conic k = unit_circle();
    Line t1 = tangent_line_at(k, {1, 0});
    CHECK(std::abs(t1.signed_distance({1, 0})) < 1e-12);
    CHECK(std::abs(std::abs(t1.signed_distance({0, 0})) - 1.0) < 1e-12);

    Conic up = Conic::from_coefficients(1, 0, 0, 0, -1, 0, Point{0, 1});
    Line t2 = tangent_line_at(up, {1, 1});
    // y = 2x - 1 contains (0.5, 0) and (2, 3)
    CHECK(std::abs(t2.signed_distance({0.5, 0.0})) < 1e-12);
    CHECK(std::abs(t2.signed_distance({2.0, 3.0})) < 1e-12);

    CHECK_THROWS_MATCHES(tangent_line_at(k, {2, 2}), Error,
                         MessageMatches(ContainsSubstring("point not on conic")));
    Conic crossing = Conic::from_coefficients(1, 0, -1, 0, 0, 0);
    CHECK_THROWS_MATCHES(tangent_line_at(crossing, {0, 0}), Error,
                         MessageMatches(ContainsSubstring("singular point on conic")));
}

TEST_CASE("affine transform of conics") {
    AffineMap m = compose(AffineMap::translation({3, -2}), AffineMap::rotation(0.7));
    Conic k = unit_circle();
    Conic km = transform_conic(m, k);
    CHECK(classify(km) == ConicClass::ellipse);
    for (double th : {0.0, 0.5, 2.0, 4.0}) {
        Point p{std::cos(th), std::sin(th)};
        Point q = m(p);
        CHECK(std::abs(km.evaluate(q)) < 1e-12);
    }
    CHECK(km.evaluate(m(Point{0, 0})) < 0.0);

    ParabolaFrame fr;
    fr.vertex = {1.0, 2.0};
    fr.axis = {0.0, 1.0};
    fr.focal = 0.5;
    Conic pm = transform_conic(m, conic_from_frame(fr));
    ParabolaFrame got = frame_from_conic(pm);
    CHECK(near_pt(got.vertex, m(fr.vertex), 1e-9));
    CHECK(near_pt(Point{got.axis.x, got.axis.y},
                  Point{m.map_direction(fr.axis).x, m.map_direction(fr.axis).y}, 1e-9));
    CHECK(got.focal == Catch::Approx(fr.focal).epsilon(1e-9));
}

TEST_CASE("intersection of two crossing parabolas") {
    IntersectionSet s = intersect_conics(par_down(), par_left());
    REQUIRE(s.points.size() == 4);
    CHECK(s.total_multiplicity() == 4);
    const double r1 = (-1.0 - SQ6) / 2.0, r2 = (1.0 - SQ2) / 2.0;
    const double r3 = (-1.0 + SQ6) / 2.0, r4 = (1.0 + SQ2) / 2.0;
    CHECK(near_pt(s.points[0].first, {r1, r1}));
    CHECK(near_pt(s.points[1].first, {r2, 1.0 - r2}));
    CHECK(near_pt(s.points[2].first, {r3, r3}));
    CHECK(near_pt(s.points[3].first, {r4, 1.0 - r4}));
    for (const auto& [p, m] : s.points) CHECK(m == 1);
}

TEST_CASE("tangential intersection has multiplicity two") {
    IntersectionSet s = intersect_conics(par_down(), unit_circle());
    REQUIRE(s.points.size() == 2);
    CHECK(s.total_multiplicity() == 4);
    CHECK(near_pt(s.points[0].first, {-SQ3 / 2.0, 0.5}));
    CHECK(near_pt(s.points[1].first, {SQ3 / 2.0, 0.5}));
    CHECK(s.points[0].second == 2);
    CHECK(s.points[1].second == 2);
}

TEST_CASE("mirror parabolas meet twice") {
    Conic up = Conic::from_coefficients(1, 0, 0, 0, -1, -1.25, Point{0, 2});
    IntersectionSet s = intersect_conics(par_down(), up);
    REQUIRE(s.points.size() == 2);
    CHECK(near_pt(s.points[0].first, {-SQ5 / 2.0, 0.0}));
    CHECK(near_pt(s.points[1].first, {SQ5 / 2.0, 0.0}));
    CHECK(s.points[0].second == 1);
    CHECK(s.points[1].second == 1);
}

TEST_CASE("circle pair intersections") {
    Conic k1 = unit_circle();
    Conic far = Conic::from_coefficients(1, 0, 1, -20, 0, 99, Point{10, 0});
    CHECK(intersect_conics(k1, far).points.empty());

    Conic inner = Conic::from_coefficients(1, 0, 1, 0, 0, -4, Point{0, 0});
    CHECK(intersect_conics(k1, inner).points.empty());

    Conic tangent = Conic::from_coefficients(1, 0, 1, 0, -6, 5, Point{0, 3});
    IntersectionSet s = intersect_conics(k1, tangent);
    REQUIRE(s.points.size() == 1);
    CHECK(near_pt(s.points[0].first, {0.0, 1.0}, 1e-7));
    CHECK(s.points[0].second == 2);

    Conic two = Conic::from_coefficients(1, 0, 1, -2, 0, 0, Point{1, 0});
    IntersectionSet s2 = intersect_conics(k1, two);
    REQUIRE(s2.points.size() == 2);
    CHECK(near_pt(s2.points[0].first, {0.5, -SQ3 / 2.0}));
    CHECK(near_pt(s2.points[1].first, {0.5, SQ3 / 2.0}));
}

TEST_CASE("degenerate operand intersections") {
    Conic cross = Conic::from_coefficients(1, 0, -1, 0, 0, 0);
    IntersectionSet s = intersect_conics(cross, unit_circle());
    REQUIRE(s.points.size() == 4);
    const double h = 1.0 / SQ2;
    CHECK(near_pt(s.points[0].first, {-h, -h}));
    CHECK(near_pt(s.points[1].first, {-h, h}));
    CHECK(near_pt(s.points[2].first, {h, -h}));
    CHECK(near_pt(s.points[3].first, {h, h}));

    Conic pair1 = Conic::from_coefficients(1, 0, -1, 0, 0, 0);
    Conic pair2 = Conic::from_coefficients(0, 1, 0, 0, 0, -0.0);
    IntersectionSet s2 = intersect_conics(pair1, pair2);
    // x = +/-y meets xy = 0 only at the origin
    REQUIRE(s2.points.size() == 1);
    CHECK(near_pt(s2.points[0].first, {0, 0}));
    CHECK(s2.total_multiplicity() == 4);
}

TEST_CASE("intersection error cases") {
    CHECK_THROWS_MATCHES(intersect_conics(par_down(), par_down()), Error,
                         MessageMatches(ContainsSubstring("coincident")));
    Conic negated = Conic::from_coefficients(-1, 0, 0, 0, -1, 1.25);
    CHECK_THROWS_MATCHES(intersect_conics(par_down(), negated), Error,
                         MessageMatches(ContainsSubstring("coincident")));

    Conic pair1 = Conic::from_coefficients(1, 0, -1, 0, 0, 0);     // (x-y)(x+y)
    Conic pair2 = Conic::from_coefficients(1, 1, -2, 0, 0, 0);     // (x-y)(x+2y)
    CHECK_THROWS_MATCHES(intersect_conics(pair1, pair2), Error,
                         MessageMatches(ContainsSubstring("shared component")));
}

TEST_CASE("random conic pairs obey the degree bound") {
    int nonempty = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Rng r = Rng::substream(0xB0B, trial);
        Conic a, b;
        if (r.pick(2) == 0) {
            Point c{r.uniform(-2, 2), r.uniform(-2, 2)};
            double rad = r.uniform(0.3, 2.5);
            a = Conic::from_coefficients(1, 0, 1, -2 * c.x, -2 * c.y,
                                         norm2(c) - rad * rad, c);
        } else {
            ParabolaFrame fr;
            fr.vertex = {r.uniform(-2, 2), r.uniform(-2, 2)};
            double th = r.angle();
            fr.axis = {std::cos(th), std::sin(th)};
            fr.focal = r.uniform(0.1, 1.5);
            a = conic_from_frame(fr);
        }
        {
            ParabolaFrame fr;
            fr.vertex = {r.uniform(-2, 2), r.uniform(-2, 2)};
            double th = r.angle();
            fr.axis = {std::cos(th), std::sin(th)};
            fr.focal = r.uniform(0.1, 1.5);
            b = conic_from_frame(fr);
        }
        IntersectionSet s = intersect_conics(a, b);
        CHECK(s.total_multiplicity() <= 4);
        if (!s.points.empty()) ++nonempty;
        for (const auto& [p, m] : s.points) {
            const double scale = 1.0 + norm2(p);
            CHECK(std::abs(a.evaluate(p)) < 1e-9 * scale);
            CHECK(std::abs(b.evaluate(p)) < 1e-9 * scale);
        }
    }
    CHECK(nonempty > 150);
}
