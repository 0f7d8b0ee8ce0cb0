#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pq/conic.hpp"

namespace pq {

// Parabola tangent to k at the endpoints of a non-diameter chord: the locus of
// points whose distance to the chord line equals the tangent length to k.
inline Conic parabola_from_tangent_chord(const Circle& k, Point a, Point b,
                                         const Tolerance& tol = {}) {
    tol.validate();
    const double scale = std::max(1.0, k.radius);
    if (std::abs(distance(a, k.center) - k.radius) > tol.eps_construct * scale ||
        std::abs(distance(b, k.center) - k.radius) > tol.eps_construct * scale)
        fail("chord endpoint not on circle");
    const Line chord = Line::through_points(a, b);
    if (std::abs(chord.signed_distance(k.center)) <= tol.eps_construct * k.radius)
        fail("degenerate: parallel line pair");
    const Vec2 n = chord.n;
    const Point i = k.center;
    return Conic::from_coefficients(1.0 - n.x * n.x, -2.0 * n.x * n.y, 1.0 - n.y * n.y,
                                    2.0 * (n.x * chord.c - i.x), 2.0 * (n.y * chord.c - i.y),
                                    norm2(i) - k.radius * k.radius - chord.c * chord.c, i,
                                    tol);
}

// Defect of the tangent-length identity at p: zero exactly on the parabola.
inline double lemma1_residual(const Conic& q, const Circle& k, const Line& chord, Point p,
                              const Tolerance& tol = {}) {
    if (classify(q, tol) != ConicClass::parabola) fail("not a parabola");
    return std::abs(distance_point_line(p, chord) - tangent_length(p, k, tol));
}

namespace detail {

// |point_at(w) - center|^2 - r^2 as a quartic in the frame abscissa, ascending.
// The cubic term vanishes because across() and axis are orthogonal.
inline std::array<double, 5> contact_quartic(const ParabolaFrame& fr, const Circle& k) {
    const Vec2 dv = fr.vertex - k.center;
    const double s = fr.slope_coefficient();
    return {norm2(dv) - k.radius * k.radius, 2.0 * dot(dv, fr.across()),
            1.0 + 2.0 * s * dot(dv, fr.axis), 0.0, s * s};
}

}  // namespace detail

// Circle tangent to the parabola at both endpoints of the chord perpendicular
// to the axis at ordinate xi0. Tangency is certified by the contact quartic
// decomposing as a perfect square.
inline Circle circle_tangent_at_chord(const ParabolaFrame& fr, double xi0,
                                      const Tolerance& tol = {}) {
    tol.validate();
    if (!(xi0 > 0.0)) fail("chord ordinate must be positive");
    const Circle out = Circle::make(fr.vertex + (xi0 + 2.0 * fr.focal) * fr.axis,
                                    2.0 * std::sqrt(fr.focal * (xi0 + fr.focal)));
    const auto [sq, resid] = square_decompose_quartic(detail::contact_quartic(fr, out), tol);
    (void)sq;
    if (resid > tol.eps_construct) fail("tangency not achieved");
    return out;
}

struct Lemma2Figure {
    Point h;      // foot of p on the chord ab
    Point k;      // foot of h on line ap
    Point l;      // foot of h on line bp
    Point c;      // meet of the perpendicular to ap at a and to bp at b
    Circle omega; // tangent circle at the chord, independent of p
};

inline Lemma2Figure lemma2_points(const ParabolaFrame& fr, double xi0, Point p,
                                  const Tolerance& tol = {}) {
    tol.validate();
    if (!(xi0 > 0.0)) fail("chord ordinate must be positive");
    if (fr.on_curve_residual(p) > tol.eps_iterative) fail("point not on parabola");
    const double w0 = 2.0 * std::sqrt(fr.focal * xi0);
    const Point a = fr.point_at(-w0), b = fr.point_at(w0);
    const double sep = tol.cluster_eps(std::max(norm(a - fr.vertex), norm(p - fr.vertex)));
    if (distance(p, a) <= sep || distance(p, b) <= sep) fail("degenerate pencil ray");
    const Line ab = Line::through_points(a, b);
    const Line ap = Line::through_points(a, p), bp = Line::through_points(b, p);
    Lemma2Figure fig;
    fig.h = project_point_line(p, ab);
    fig.k = project_point_line(fig.h, ap);
    fig.l = project_point_line(fig.h, bp);
    const Line perp_a = Line::from_normal_offset(ap.direction(), dot(ap.direction(), a));
    const Line perp_b = Line::from_normal_offset(bp.direction(), dot(bp.direction(), b));
    fig.c = intersect_lines(perp_a, perp_b, tol);
    fig.omega = circle_tangent_at_chord(fr, xi0, tol);
    return fig;
}

namespace detail {

inline std::array<double, 6> line_product_coeffs(const Line& u, const Line& v) {
    const double uz = -u.c, vz = -v.c;
    return {u.n.x * v.n.x,
            u.n.x * v.n.y + u.n.y * v.n.x,
            u.n.y * v.n.y,
            u.n.x * vz + uz * v.n.x,
            u.n.y * vz + uz * v.n.y,
            uz * vz};
}

inline void require_simple_quad(const std::array<Point, 4>& pts, const Tolerance& tol) {
    double scale = 1.0;
    for (Point p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (distance(pts[i], pts[j]) <= tol.eps_construct * scale)
                fail("coincident points");
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            for (std::size_t k = j + 1; k < 4; ++k)
                if (collinearity_residual(pts[i], pts[j], pts[k]) <= tol.eps_construct)
                    fail("collinear points");
}

inline void sort_ccw_about(std::vector<Point>& pts, Point center) {
    std::sort(pts.begin(), pts.end(), [center](Point a, Point b) {
        const double aa = std::atan2(a.y - center.y, a.x - center.x);
        const double ab = std::atan2(b.y - center.y, b.x - center.x);
        if (aa != ab) return aa < ab;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
}

}  // namespace detail

struct FourPointParabolas {
    std::vector<Conic> parabolas;   // 0, 1, or 2 members, witness at the focus
    std::vector<Conic> degenerate;  // degenerate pencil members, for diagnostics
    std::string note;
};

// The line pairs (ab)(cd) and (ac)(bd) span the pencil of conics through the
// four points; parabola members are the roots of the discriminant quadratic.
// The pair (ab)(cd) itself is the member at infinity of the t-parametrization
// and enters when the quadratic drops degree.
inline FourPointParabolas parabolas_through_four_points(Point a, Point b, Point c, Point d,
                                                        const Tolerance& tol = {}) {
    tol.validate();
    detail::require_simple_quad({a, b, c, d}, tol);
    const auto f = detail::line_product_coeffs(Line::through_points(a, b),
                                               Line::through_points(c, d));
    const auto g = detail::line_product_coeffs(Line::through_points(a, c),
                                               Line::through_points(b, d));
    const std::array<double, 3> disc = {detail::det2_of(g),
                                        f[0] * g[2] + g[0] * f[2] - 0.5 * f[1] * g[1],
                                        detail::det2_of(f)};
    const RootSet rs = solve_polynomial(disc, tol);
    std::vector<std::array<double, 6>> members;
    for (const auto& r : rs.roots) {
        std::array<double, 6> m;
        for (int i = 0; i < 6; ++i) m[i] = r.value * f[i] + g[i];
        members.push_back(m);
    }
    if (rs.degree < 2) members.push_back(f);
    FourPointParabolas out;
    if (members.empty()) out.note = "no real parabolas";
    for (const auto& m : members) {
        const Conic raw = Conic::from_coefficients(m[0], m[1], m[2], m[3], m[4], m[5], {}, tol);
        if (classify(raw, tol) != ConicClass::parabola) {
            out.degenerate.push_back(raw);
            continue;
        }
        const Conic q = conic_from_frame(frame_from_conic(raw, tol), tol);
        for (Point p : {a, b, c, d})
            if (std::abs(q.evaluate(p)) > tol.eps_construct * detail::eval_scale(q.coeffs(), p))
                fail("pencil member misses an input point");
        out.parabolas.push_back(q);
    }
    return out;
}

struct ParabolicQuadrilateral {
    Conic p1, p2;
    std::array<Point, 4> vertices;  // counterclockwise about their centroid
    std::array<Line, 2> diagonals;  // (v0, v2) and (v1, v3)
    Point l;                        // diagonal intersection
};

inline ParabolicQuadrilateral parabolic_quadrilateral(const Conic& p1, const Conic& p2,
                                                      const Tolerance& tol = {}) {
    tol.validate();
    if (classify(p1, tol) != ConicClass::parabola || classify(p2, tol) != ConicClass::parabola)
        fail("not a parabola");
    const IntersectionSet s = intersect_conics(p1, p2, tol);
    if (s.points.size() != 4 || s.total_multiplicity() != 4)
        fail("not a parabolic quadrilateral");
    std::vector<Point> v;
    for (const auto& [p, m] : s.points) v.push_back(p);
    Point centroid{0.0, 0.0};
    for (Point p : v) centroid = centroid + p;
    centroid = centroid / 4.0;
    detail::sort_ccw_about(v, centroid);
    ParabolicQuadrilateral out{p1,
                               p2,
                               {v[0], v[1], v[2], v[3]},
                               {Line::through_points(v[0], v[2]),
                                Line::through_points(v[1], v[3])},
                               {}};
    out.l = intersect_lines(out.diagonals[0], out.diagonals[1], tol);
    return out;
}

inline double perpendicular_diagonals_residual(const ParabolicQuadrilateral& pq) {
    return std::abs(dot(pq.diagonals[0].direction(), pq.diagonals[1].direction()));
}

struct InscribedCircleResult {
    Circle circle;
    std::array<Point, 2> tangency_p1;  // contact with p1, ascending frame abscissa
    std::array<Point, 2> tangency_p2;  // contact with p2
    std::array<double, 2> certificates{};
};

namespace detail {

inline std::array<Point, 2> certified_tangency(const Conic& parab, const Circle& k,
                                               double* certificate, const Tolerance& tol) {
    const ParabolaFrame fr = frame_from_conic(parab, tol);
    const auto [sq, resid] = square_decompose_quartic(contact_quartic(fr, k), tol);
    *certificate = resid;
    if (resid > tol.eps_iterative) fail("tangency not achieved");
    const RootSet rs = solve_polynomial(sq, tol);
    if (rs.roots.size() != 2) fail("tangency not achieved");
    return {fr.point_at(rs.roots[0].value), fr.point_at(rs.roots[1].value)};
}

}  // namespace detail

// Circle through the projections of the diagonal point onto the four side
// lines, certified tangent to both parabolas.
inline InscribedCircleResult inscribed_circle(const ParabolicQuadrilateral& pq,
                                              const Tolerance& tol = {}) {
    tol.validate();
    if (perpendicular_diagonals_residual(pq) > tol.eps_iterative)
        fail("diagonals not perpendicular");
    std::array<Point, 4> proj;
    for (int i = 0; i < 4; ++i) {
        const Line side = Line::through_points(pq.vertices[std::size_t(i)],
                                               pq.vertices[std::size_t((i + 1) % 4)]);
        proj[std::size_t(i)] = project_point_line(pq.l, side);
    }
    InscribedCircleResult out;
    out.circle = circle_through_three(proj[0], proj[1], proj[2], tol);
    if (std::abs(distance(proj[3], out.circle.center) - out.circle.radius) >
        tol.eps_iterative * std::max(1.0, out.circle.radius))
        fail("projections not concyclic");
    out.tangency_p1 = detail::certified_tangency(pq.p1, out.circle, &out.certificates[0], tol);
    out.tangency_p2 = detail::certified_tangency(pq.p2, out.circle, &out.certificates[1], tol);
    return out;
}

struct AxialLineSolution {
    Line line;  // through the diagonal point
    Point e;    // on line ab, e = a + t (b - a)
    Point f;    // on line cd, f = c + s (d - c)
    double t = 0.0;
    double s = 0.0;
};

struct AxialLinesResult {
    std::vector<AxialLineSolution> solutions;
    std::string note;
};

// Lines through the diagonal intersection meeting line ab at e and line cd at
// f with equal signed ratios ae/eb = fd/cf. Collinearity of e, l, f reduces to
// a quadratic in t once the ratio condition fixes s = 1 - t.
inline AxialLinesResult axial_lines(Point a, Point b, Point c, Point d,
                                    const Tolerance& tol = {}) {
    tol.validate();
    detail::require_simple_quad({a, b, c, d}, tol);
    const Line ac = Line::through_points(a, c), bd = Line::through_points(b, d);
    if (std::abs(cross(ac.n, bd.n)) <= tol.eps_construct) fail("no diagonal intersection");
    const Point l = intersect_lines(ac, bd, tol);
    const Vec2 e0 = a - l, e1 = b - a, f0 = d - l, f1 = d - c;
    const std::array<double, 3> quad = {cross(e0, f0), cross(e1, f0) - cross(e0, f1),
                                        -cross(e1, f1)};
    AxialLinesResult out;
    RootSet rs;
    try {
        rs = solve_polynomial(quad, tol);
    } catch (const Error&) {
        out.note = "indeterminate";
        return out;
    }
    if (rs.roots.empty()) out.note = rs.degree < 2 ? "no finite solution" : "no real axial line";
    for (const auto& r : rs.roots) {
        AxialLineSolution sol;
        sol.t = r.value;
        sol.s = 1.0 - r.value;
        sol.e = a + sol.t * e1;
        sol.f = c + sol.s * (d - c);
        const double sep = tol.cluster_eps(std::max({norm(sol.e), norm(sol.f), norm(l)}));
        if (distance(sol.e, sol.f) > sep)
            sol.line = Line::through_points(sol.e, sol.f);
        else if (distance(sol.e, l) > sep)
            sol.line = Line::through_points(sol.e, l);
        else {
            out.note = "axial line indeterminate";
            continue;
        }
        if (std::abs(1.0 - sol.t) > 1e-6 && std::abs(sol.s) > 1e-6) {
            const double r1 = signed_ratio(a, b, sol.e, tol);
            const double r2 = signed_ratio(d, c, sol.f, tol);
            if (std::abs(r1 - r2) > tol.eps_iterative * std::max(1.0, std::abs(r1)))
                fail("ratio verification failed");
        }
        out.solutions.push_back(sol);
    }
    return out;
}

// Symmetric unit-determinant linear map sending the two parabola axes to a
// perpendicular pair and the two diagonals to a perpendicular pair. The two
// bilinear conditions are linear in the entries of M = S^T S; the map exists
// exactly when a positive-definite solution does.
inline AffineMap affine_normalizer(const ParabolicQuadrilateral& pq, const Tolerance& tol = {}) {
    tol.validate();
    const Vec2 u1 = frame_from_conic(pq.p1, tol).axis;
    const Vec2 u2 = frame_from_conic(pq.p2, tol).axis;
    const Vec2 v1 = pq.diagonals[0].direction(), v2 = pq.diagonals[1].direction();
    if (std::abs(cross(u1, u2)) <= tol.eps_construct ||
        std::abs(cross(v1, v2)) <= tol.eps_construct)
        fail("coincident directions");
    const auto row = [](Vec2 p, Vec2 q) {
        return std::array<double, 3>{p.x * q.x, p.x * q.y + p.y * q.x, p.y * q.y};
    };
    const auto r1 = row(u1, u2), r2 = row(v1, v2);
    // m holds (m11, m12, m22) of the symmetric M solving r1 . m = r2 . m = 0.
    std::array<double, 3> m = {r1[1] * r2[2] - r1[2] * r2[1], r1[2] * r2[0] - r1[0] * r2[2],
                               r1[0] * r2[1] - r1[1] * r2[0]};
    if (std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2])}) <= tol.eps_construct) {
        // The two conditions coincide; stretch across the bisector of the axis
        // pair, balancing the stretch for a minimal condition number.
        Vec2 p = normalized(u1), q = normalized(u2);
        if (dot(p, q) < 0.0) q = -q;
        const Vec2 b1 = normalized(p + q), b2 = perp(b1);
        const double ca = std::abs(dot(p, b1)), sa = std::abs(cross(p, b1));
        if (sa <= tol.eps_construct || ca <= tol.eps_construct) fail("coincident directions");
        const double tn = sa / ca;
        m = {tn * b1.x * b1.x + b2.x * b2.x / tn, tn * b1.x * b1.y + b2.x * b2.y / tn,
             tn * b1.y * b1.y + b2.y * b2.y / tn};
    }
    if (m[0] + m[2] < 0.0)
        for (auto& x : m) x = -x;
    const double mn = std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2])});
    const double det = m[0] * m[2] - m[1] * m[1];
    if (det <= tol.eps_construct * mn * mn) fail("directions do not interleave");
    // Scale to det 1, then S = (M + I) / sqrt(tr M + 2) is the symmetric
    // square root (Cayley-Hamilton), still with unit determinant.
    const double sd = std::sqrt(det);
    const double a11 = m[0] / sd, a12 = m[1] / sd, a22 = m[2] / sd;
    const double denom = std::sqrt(a11 + a22 + 2.0);
    const AffineMap out{{(a11 + 1.0) / denom, a12 / denom, a12 / denom, (a22 + 1.0) / denom},
                        {0.0, 0.0}};
    const double ru =
        std::abs(dot(normalized(out.map_direction(u1)), normalized(out.map_direction(u2))));
    const double rv =
        std::abs(dot(normalized(out.map_direction(v1)), normalized(out.map_direction(v2))));
    if (ru > tol.eps_iterative || rv > tol.eps_iterative) fail("normalization failed");
    return out;
}

struct FourthIntersection {
    Point point;
    double abscissa = 0.0;
    bool tangential = false;  // the circle through the inputs is tangent there
};

// Fourth meeting point of the parabola with the circle through three of its
// points: frame abscissae of the four intersections sum to zero.
inline FourthIntersection fourth_intersection(const ParabolaFrame& fr, Point a, Point b,
                                              Point c, const Tolerance& tol = {}) {
    tol.validate();
    for (Point p : {a, b, c})
        if (fr.on_curve_residual(p) > tol.eps_iterative) fail("point not on parabola");
    const double wa = fr.abscissa_of(a), wb = fr.abscissa_of(b), wc = fr.abscissa_of(c);
    const double sep = tol.cluster_eps(std::max({std::abs(wa), std::abs(wb), std::abs(wc)}));
    if (std::abs(wa - wb) <= sep || std::abs(wa - wc) <= sep || std::abs(wb - wc) <= sep)
        fail("coincident points");
    FourthIntersection out;
    out.abscissa = -(wa + wb + wc);
    out.point = fr.point_at(out.abscissa);
    out.tangential = std::min({std::abs(out.abscissa - wa), std::abs(out.abscissa - wb),
                               std::abs(out.abscissa - wc)}) <= sep;
    if (concyclicity_residual(a, b, c, out.point, tol) > tol.eps_iterative)
        fail("concyclicity failed");
    return out;
}

struct NGonConfig {
    Circle circle;
    Point x;
    int n = 0;
    double theta0 = 0.0;
};

struct NGonResult {
    NGonConfig config;
    std::vector<Conic> parabolas;  // one per chord
    std::vector<Point> vertices;   // 2n points, counterclockwise about x
    Circle fitted_circle;
    double residual = 0.0;  // max relative distance defect against the fit
};

namespace detail {

inline std::pair<Point, Point> chord_endpoints(const Circle& k, Point x, Vec2 dir) {
    const Vec2 u = normalized(dir);
    const double ph = dot(u, x - k.center);
    const double q0 = norm2(x - k.center) - k.radius * k.radius;
    const double s = std::sqrt(ph * ph - q0);
    const double tb = -(ph + std::copysign(s, ph));
    return {x + tb * u, x + (q0 / tb) * u};
}

// Pairwise parabola intersections on the inner (witness) side of every
// parabola, deduplicated.
inline std::vector<Point> region_vertices(std::span<const Conic> ps, double scale,
                                          const Tolerance& tol) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const IntersectionSet s = intersect_conics(ps[i], ps[j], tol);
            for (const auto& [p, mult] : s.points) {
                bool keep = true;
                for (const auto& q : ps)
                    if (q.evaluate(p) > tol.eps_iterative * eval_scale(q.coeffs(), p)) {
                        keep = false;
                        break;
                    }
                if (!keep) continue;
                bool dup = false;
                for (Point v : out)
                    if (distance(v, p) <= tol.cluster_eps(scale)) {
                        dup = true;
                        break;
                    }
                if (!dup) out.push_back(p);
            }
        }
    return out;
}

inline Point least_squares_line_point(std::span<const Line> lines, const Tolerance& tol) {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (const Line& l : lines) {
        a11 += l.n.x * l.n.x;
        a12 += l.n.x * l.n.y;
        a22 += l.n.y * l.n.y;
        b1 += l.n.x * l.c;
        b2 += l.n.y * l.c;
    }
    const double det = a11 * a22 - a12 * a12;
    if (det <= tol.eps_construct * std::max(1.0, a11 + a22)) fail("degenerate diagonals");
    return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det};
}

}  // namespace detail

// 2n-gon cut out by the tangent-chord parabolas of n chords through x that
// split the pencil of directions evenly.
inline NGonResult build_ngon(const Circle& k, Point x, int n, double theta0,
                             const Tolerance& tol = {}) {
    tol.validate();
    if (n < 2) fail("need at least two chords");
    if (distance(x, k.center) >= k.radius) fail("point not inside circle");
    NGonResult out;
    out.config = {k, x, n, theta0};
    for (int j = 0; j < n; ++j) {
        const double th = theta0 + double(j) * std::numbers::pi / double(n);
        const auto [a, b] = detail::chord_endpoints(k, x, {std::cos(th), std::sin(th)});
        out.parabolas.push_back(parabola_from_tangent_chord(k, a, b, tol));
    }
    out.vertices =
        detail::region_vertices(out.parabolas, norm(k.center) + k.radius, tol);
    if (out.vertices.size() != std::size_t(2 * n)) fail("degenerate configuration");
    detail::sort_ccw_about(out.vertices, x);
    out.fitted_circle = fit_circle(out.vertices);
    for (Point v : out.vertices)
        out.residual = std::max(out.residual, std::abs(distance(v, out.fitted_circle.center) -
                                                       out.fitted_circle.radius));
    out.residual /= out.fitted_circle.radius;
    return out;
}

inline Point triangle_incenter(Point a, Point b, Point c, const Tolerance& tol = {}) {
    if (collinearity_residual(a, b, c) <= tol.eps_construct) fail("collinear points");
    const double la = distance(b, c), lb = distance(c, a), lc = distance(a, b);
    return (la * a + lb * b + lc * c) / (la + lb + lc);
}

struct ConcurrencyResult {
    Point point;
    double residual = 0.0;  // max diagonal distance over the circle radius
};

// Main diagonals of the circumscribed parabolic hexagon built on three chords.
// They concur at the incenter of the chord-line triangle.
inline ConcurrencyResult hexagon_diagonal_concurrency(
    const Circle& k, const std::array<std::pair<Point, Point>, 3>& chords,
    const Tolerance& tol = {}) {
    tol.validate();
    std::array<Line, 3> lines;
    std::vector<Conic> ps;
    for (std::size_t i = 0; i < 3; ++i) {
        lines[i] = Line::through_points(chords[i].first, chords[i].second);
        ps.push_back(parabola_from_tangent_chord(k, chords[i].first, chords[i].second, tol));
    }
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (lines[i].same_line(lines[j], tol.eps_construct)) fail("coincident chords");
    std::vector<Point> verts =
        detail::region_vertices(ps, norm(k.center) + k.radius, tol);
    if (verts.size() != 6) fail("hexagon does not exist");
    Point centroid{0.0, 0.0};
    for (Point v : verts) centroid = centroid + v;
    centroid = centroid / 6.0;
    detail::sort_ccw_about(verts, centroid);
    std::array<Line, 3> diags;
    for (std::size_t i = 0; i < 3; ++i)
        diags[i] = Line::through_points(verts[i], verts[i + 3]);
    ConcurrencyResult out;
    out.point = detail::least_squares_line_point(diags, tol);
    for (const Line& dl : diags)
        out.residual = std::max(out.residual, std::abs(dl.signed_distance(out.point)));
    out.residual /= k.radius;
    // Cross-check against the incenter when the chords pairwise cross in the
    // interior of the circle; with crossings outside, the six region corners
    // no longer pick one bisector per line pair and the match is meaningless.
    double worst = 1.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            worst = std::min(worst, std::abs(cross(lines[i].n, lines[j].n)));
    if (worst > 1e-3) {
        const Point ta = intersect_lines(lines[1], lines[2], tol);
        const Point tb = intersect_lines(lines[0], lines[2], tol);
        const Point tc = intersect_lines(lines[0], lines[1], tol);
        const double inside = k.radius * (1.0 - 1e-6);
        const bool interior = distance(ta, k.center) < inside &&
                              distance(tb, k.center) < inside &&
                              distance(tc, k.center) < inside;
        if (interior && collinearity_residual(ta, tb, tc) > tol.eps_construct) {
            const Point inc = triangle_incenter(ta, tb, tc, tol);
            if (distance(inc, out.point) > tol.eps_iterative * std::max(1.0, k.radius))
                fail("incenter mismatch");
        }
    }
    return out;
}

}  // namespace pq
