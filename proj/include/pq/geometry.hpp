#pragma once
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "pq/error.hpp"
#include "pq/tolerance.hpp"

namespace pq {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    bool operator==(const Vec2&) const = default;
};
using Point = Vec2;

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

inline Vec2 normalized(Vec2 a) {
    double n = norm(a);
    if (n == 0.0) fail("degenerate direction: zero vector");
    return a / n;
}

// Smallest angle between two directions treated as undirected lines, in [0, pi/2].
inline double direction_angle(Vec2 a, Vec2 b) {
    double c = std::abs(dot(normalized(a), normalized(b)));
    return std::acos(std::min(1.0, c));
}

// Oriented line {P : dot(n, P) = c} with unit normal n.
struct Line {
    Vec2 n{1.0, 0.0};
    double c = 0.0;

    static Line from_normal_offset(Vec2 normal, double offset) {
        double len = norm(normal);
        if (len == 0.0) fail("degenerate line: zero normal");
        return {normal / len, offset / len};
    }

    static Line through_points(Point a, Point b) {
        Vec2 d = b - a;
        if (norm(d) == 0.0) fail("degenerate line: coincident points");
        Vec2 normal = normalized(perp(d));
        return {normal, dot(normal, a)};
    }

    double signed_distance(Point p) const { return dot(n, p) - c; }
    Vec2 direction() const { return perp(n); }

    // Same locus regardless of normal orientation.
    bool same_line(const Line& o, double eps = 1e-9) const {
        double dplus = std::max(norm(n - o.n), std::abs(c - o.c));
        double dminus = std::max(norm(n + o.n), std::abs(c + o.c));
        return std::min(dplus, dminus) <= eps;
    }
};

inline double distance_point_line(Point p, const Line& l) {
    return std::abs(l.signed_distance(p));
}

inline Point project_point_line(Point p, const Line& l) {
    return p - l.signed_distance(p) * l.n;
}

inline Point intersect_lines(const Line& a, const Line& b, const Tolerance& tol = {}) {
    double det = cross(a.n, b.n);
    if (std::abs(det) <= tol.eps_construct) fail("parallel lines");
    double x = (a.c * b.n.y - b.c * a.n.y) / det;
    double y = (a.n.x * b.c - b.n.x * a.c) / det;
    return {x, y};
}

struct Circle {
    Point center;
    double radius = 1.0;

    static Circle make(Point center, double radius) {
        if (!(radius > 0.0)) fail("degenerate circle: radius must be positive");
        return {center, radius};
    }

    Point at_angle(double theta) const {
        return center + Vec2{radius * std::cos(theta), radius * std::sin(theta)};
    }

    bool contains_on_boundary(Point p, double eps = 1e-9) const {
        return std::abs(distance(p, center) - radius) <= eps * radius;
    }
};

// Length of the tangent segment from p to the circle. Points inside by more
// than the tolerance band are rejected; tiny negative discriminants clamp to 0.
inline double tangent_length(Point p, const Circle& k, const Tolerance& tol = {}) {
    double d2 = norm2(p - k.center);
    double r2 = k.radius * k.radius;
    double t2 = d2 - r2;
    double scale = std::max(d2, r2);
    if (t2 < -tol.eps_construct * scale) fail("point inside circle");
    return std::sqrt(std::max(0.0, t2));
}

// sin of the angle at q in triangle (p, q, r); 0 means collinear.
inline double collinearity_residual(Point p, Point q, Point r) {
    double lp = distance(q, p), lr = distance(q, r);
    if (lp == 0.0 || lr == 0.0) return 0.0;
    return std::abs(cross(p - q, r - q)) / (lp * lr);
}

inline Circle circle_through_three(Point p, Point q, Point r, const Tolerance& tol = {}) {
    if (collinearity_residual(p, q, r) <= tol.eps_construct)
        fail("degenerate circle: collinear points");
    // Perpendicular bisectors of (p,q) and (p,r).
    Line b1{normalized(q - p), dot(normalized(q - p), (p + q) / 2.0)};
    Line b2{normalized(r - p), dot(normalized(r - p), (p + r) / 2.0)};
    Point center = intersect_lines(b1, b2, tol);
    return Circle::make(center, distance(center, p));
}

// Relative deviation of s from the circle through p, q, r.
inline double concyclicity_residual(Point p, Point q, Point r, Point s,
                                    const Tolerance& tol = {}) {
    Circle k = circle_through_three(p, q, r, tol);
    return std::abs(distance(s, k.center) - k.radius) / k.radius;
}

// Algebraic least-squares circle (Kasa fit).
inline Circle fit_circle(std::span<const Point> pts) {
    if (pts.size() < 3) fail("degenerate circle: need at least three points");
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, sxz = 0, syz = 0, sz = 0;
    for (const Point& p : pts) {
        double z = norm2(p);
        sx += p.x; sy += p.y; sz += z;
        sxx += p.x * p.x; syy += p.y * p.y; sxy += p.x * p.y;
        sxz += p.x * z; syz += p.y * z;
    }
    double n = double(pts.size());
    // Solve [sxx sxy sx; sxy syy sy; sx sy n] * [D E F]^T = [sxz syz sz]
    // for x^2 + y^2 - D x - E y - F = 0.
    std::array<std::array<double, 4>, 3> m{{{sxx, sxy, sx, sxz},
                                            {sxy, syy, sy, syz},
                                            {sx, sy, n, sz}}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
        std::swap(m[col], m[piv]);
        if (std::abs(m[col][col]) < 1e-14) fail("degenerate circle: singular fit");
        for (int row = 0; row < 3; ++row) {
            if (row == col) continue;
            double f = m[row][col] / m[col][col];
            for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
        }
    }
    double d = m[0][3] / m[0][0], e = m[1][3] / m[1][1], f = m[2][3] / m[2][2];
    Point center{d / 2.0, e / 2.0};
    double r2 = f + norm2(center);
    if (!(r2 > 0.0)) fail("degenerate circle: singular fit");
    return Circle::make(center, std::sqrt(r2));
}

// Row-major linear part plus translation: p -> M p + t.
struct AffineMap {
    std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};
    Vec2 t{0.0, 0.0};

    Point operator()(Point p) const {
        return {m[0] * p.x + m[1] * p.y + t.x, m[2] * p.x + m[3] * p.y + t.y};
    }
    Vec2 map_direction(Vec2 d) const {
        return {m[0] * d.x + m[1] * d.y, m[2] * d.x + m[3] * d.y};
    }
    double det() const { return m[0] * m[3] - m[1] * m[2]; }

    static AffineMap identity() { return {}; }
    static AffineMap translation(Vec2 v) { return {{1.0, 0.0, 0.0, 1.0}, v}; }
    static AffineMap rotation(double theta) {
        double c = std::cos(theta), s = std::sin(theta);
        return {{c, -s, s, c}, {0.0, 0.0}};
    }
    static AffineMap linear(double a, double b, double c, double d) {
        return {{a, b, c, d}, {0.0, 0.0}};
    }
};

// compose(a, b) applies b first: p -> a(b(p)).
inline AffineMap compose(const AffineMap& a, const AffineMap& b) {
    AffineMap r;
    r.m = {a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
           a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]};
    r.t = a(b.t);
    return r;
}

inline AffineMap inverse(const AffineMap& a, const Tolerance& tol = {}) {
    double det = a.det();
    double fro2 = a.m[0] * a.m[0] + a.m[1] * a.m[1] + a.m[2] * a.m[2] + a.m[3] * a.m[3];
    if (std::abs(det) <= tol.eps_construct * std::max(fro2, 1e-300))
        fail("singular affine map");
    AffineMap r;
    r.m = {a.m[3] / det, -a.m[1] / det, -a.m[2] / det, a.m[0] / det};
    r.t = -r.map_direction(a.t);
    return r;
}

// Parameter t with e = a + t (b - a), using projection onto the segment line.
inline double line_parameter(Point a, Point b, Point e) {
    Vec2 d = b - a;
    double l2 = norm2(d);
    if (l2 == 0.0) fail("degenerate line: coincident points");
    return dot(e - a, d) / l2;
}

// Signed ratio ae/eb = t / (1 - t) for e on line ab.
inline double signed_ratio(Point a, Point b, Point e, const Tolerance& tol = {}) {
    double t = line_parameter(a, b, e);
    if (std::abs(1.0 - t) <= tol.eps_construct) fail("ratio undefined: e coincides with b");
    return t / (1.0 - t);
}

} // namespace pq
