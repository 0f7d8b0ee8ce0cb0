#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "pq/geometry.hpp"
#include "pq/roots.hpp"

namespace pq {

// a x^2 + b xy + c y^2 + d x + e y + f = 0 with the quadratic part scaled to
// unit Frobenius norm. When inside_witness is set the overall sign is chosen
// so the conic evaluates negative there; for parabolas that pins the concave
// (focus) side as the inside.
struct Conic {
    double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;
    std::optional<Point> inside_witness;

    static Conic from_coefficients(double a, double b, double c, double d, double e,
                                   double f, std::optional<Point> witness = {},
                                   const Tolerance& tol = {}) {
        tol.validate();
        double total = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d),
                                 std::abs(e), std::abs(f)});
        if (total == 0.0) fail("not a conic: all coefficients vanish");
        double qn = std::sqrt(a * a + 0.5 * b * b + c * c);
        if (qn <= 1e-12 * total) fail("not a conic: quadratic part vanishes");
        Conic q{a / qn, b / qn, c / qn, d / qn, e / qn, f / qn, witness};
        if (witness && q.evaluate(*witness) > 0.0) {
            q.a = -q.a; q.b = -q.b; q.c = -q.c;
            q.d = -q.d; q.e = -q.e; q.f = -q.f;
        }
        return q;
    }

    double evaluate(Point p) const {
        return ((a * p.x + b * p.y + d) * p.x) + ((c * p.y + e) * p.y) + f;
    }

    Vec2 gradient(Point p) const {
        return {2.0 * a * p.x + b * p.y + d, b * p.x + 2.0 * c * p.y + e};
    }

    std::array<double, 6> coeffs() const { return {a, b, c, d, e, f}; }
};

enum class ConicClass {
    ellipse,
    parabola,
    hyperbola,
    intersecting_lines,
    parallel_lines,
    double_line,
    point,
    empty,
};

inline bool is_degenerate(ConicClass k) {
    return k != ConicClass::ellipse && k != ConicClass::parabola &&
           k != ConicClass::hyperbola;
}

inline const char* to_string(ConicClass k) {
    switch (k) {
        case ConicClass::ellipse: return "ellipse";
        case ConicClass::parabola: return "parabola";
        case ConicClass::hyperbola: return "hyperbola";
        case ConicClass::intersecting_lines: return "intersecting lines";
        case ConicClass::parallel_lines: return "parallel lines";
        case ConicClass::double_line: return "double line";
        case ConicClass::point: return "point";
        case ConicClass::empty: return "empty";
    }
    return "?";
}

namespace detail {

inline double det3_of(const std::array<double, 6>& v) {
    const double a = v[0], b = v[1], c = v[2], d = v[3], e = v[4], f = v[5];
    return a * (c * f - 0.25 * e * e) - 0.5 * b * (0.5 * b * f - 0.25 * e * d) +
           0.5 * d * (0.25 * b * e - 0.5 * c * d);
}

inline double det2_of(const std::array<double, 6>& v) {
    return v[0] * v[2] - 0.25 * v[1] * v[1];
}

// Direction of the nonzero eigenvector of the rank-1 quadratic part.
inline Vec2 rank1_direction(const std::array<double, 6>& v) {
    Vec2 c1{v[0], 0.5 * v[1]}, c2{0.5 * v[1], v[2]};
    return normalized(norm2(c1) >= norm2(c2) ? c1 : c2);
}

} // namespace detail

inline ConicClass classify(const Conic& q, const Tolerance& tol = {}) {
    tol.validate();
    const auto v = q.coeffs();
    const double d2 = detail::det2_of(v);
    const double d3 = detail::det3_of(v);
    const double ls = std::max({1.0, std::abs(q.d), std::abs(q.e),
                                std::sqrt(std::abs(q.f))});
    const double t2 = tol.eps_construct;
    const double t3 = tol.eps_construct * ls * ls;
    if (d2 > t2) {
        if (std::abs(d3) <= t3) return ConicClass::point;
        return d3 * (q.a + q.c) < 0.0 ? ConicClass::ellipse : ConicClass::empty;
    }
    if (d2 < -t2)
        return std::abs(d3) <= t3 ? ConicClass::intersecting_lines : ConicClass::hyperbola;
    if (std::abs(d3) > t3) return ConicClass::parabola;
    // Rank-1 quadratic part with no axial linear term: a parallel line family
    // kappa (eta - eta0)^2 + cc = 0.
    const double kappa = q.a + q.c;
    const Vec2 w = detail::rank1_direction(v);
    const double gw = q.d * w.x + q.e * w.y;
    const double cc = q.f - gw * gw / (4.0 * kappa);
    const double disc = -cc / kappa;
    if (std::abs(disc) <= t2 * ls * ls) return ConicClass::double_line;
    return disc > 0.0 ? ConicClass::parallel_lines : ConicClass::empty;
}

// Parabola as vertex + unit axis direction (vertex toward opening) + focal
// distance. In frame coordinates (abscissa w along perp(axis), ordinate along
// the axis) the curve is ordinate = w^2 / (4 focal).
struct ParabolaFrame {
    Point vertex;
    Vec2 axis{0.0, 1.0};
    double focal = 0.25;

    Vec2 across() const { return perp(axis); }
    Point point_at(double w) const {
        return vertex + w * across() + (w * w / (4.0 * focal)) * axis;
    }
    double abscissa_of(Point p) const { return dot(p - vertex, across()); }
    double ordinate_of(Point p) const { return dot(p - vertex, axis); }
    Point focus() const { return vertex + focal * axis; }
    double slope_coefficient() const { return 1.0 / (4.0 * focal); }
    double on_curve_residual(Point p) const {
        double xi = ordinate_of(p), eta = abscissa_of(p);
        return std::abs(eta * eta - 4.0 * focal * xi) /
               std::max(1.0, eta * eta + std::abs(4.0 * focal * xi));
    }
};

inline ParabolaFrame frame_from_conic(const Conic& q, const Tolerance& tol = {}) {
    if (classify(q, tol) != ConicClass::parabola) fail("not a parabola");
    const auto v = q.coeffs();
    const double kappa = q.a + q.c; // the nonzero eigenvalue, |kappa| == 1
    const Vec2 w = detail::rank1_direction(v);
    const Vec2 u0 = perp(w);
    const double gu = q.d * u0.x + q.e * u0.y;
    const double gw = q.d * w.x + q.e * w.y;
    if (std::abs(gu) <= tol.eps_construct) fail("not a parabola");
    // kappa (eta - eta_v)^2 = -gu (xi - xi_v) in the (u0, w) frame.
    const double eta_v = -gw / (2.0 * kappa);
    const double xi_v = -(q.f - gw * gw / (4.0 * kappa)) / gu;
    const double opening = -gu / kappa;
    ParabolaFrame fr;
    fr.vertex = xi_v * u0 + eta_v * w;
    fr.axis = opening > 0.0 ? u0 : -u0;
    fr.focal = std::abs(opening) / 4.0;
    return fr;
}

inline Conic conic_from_frame(const ParabolaFrame& fr, const Tolerance& tol = {}) {
    if (!(fr.focal > 0.0)) fail("not a parabola: focal distance must be positive");
    const Vec2 w = fr.across(), u = fr.axis;
    const double wv = dot(w, fr.vertex), uv = dot(u, fr.vertex);
    return Conic::from_coefficients(
        w.x * w.x, 2.0 * w.x * w.y, w.y * w.y,
        -2.0 * w.x * wv - 4.0 * fr.focal * u.x,
        -2.0 * w.y * wv - 4.0 * fr.focal * u.y,
        wv * wv + 4.0 * fr.focal * uv, fr.focus(), tol);
}

// Image conic under an affine map: substitutes the inverse map, i.e. the image
// of the zero set of q is the zero set of the result.
inline Conic transform_conic(const AffineMap& m, const Conic& q, const Tolerance& tol = {}) {
    const AffineMap inv = inverse(m, tol);
    // Homogeneous H^-1 rows.
    const double h[3][3] = {{inv.m[0], inv.m[1], inv.t.x},
                            {inv.m[2], inv.m[3], inv.t.y},
                            {0.0, 0.0, 1.0}};
    const double Q[3][3] = {{q.a, 0.5 * q.b, 0.5 * q.d},
                            {0.5 * q.b, q.c, 0.5 * q.e},
                            {0.5 * q.d, 0.5 * q.e, q.f}};
    double R[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    R[i][j] += h[k][i] * Q[k][l] * h[l][j];
    std::optional<Point> witness;
    if (q.inside_witness) witness = m(*q.inside_witness);
    return Conic::from_coefficients(R[0][0], 2.0 * R[0][1], R[1][1], 2.0 * R[0][2],
                                    2.0 * R[1][2], R[2][2], witness, tol);
}

inline Line tangent_line_at(const Conic& q, Point p, const Tolerance& tol = {}) {
    const double scale = 1.0 + norm2(p);
    if (std::abs(q.evaluate(p)) > tol.eps_iterative * scale)
        fail("point not on conic");
    const Vec2 g = q.gradient(p);
    if (norm(g) <= tol.eps_construct * (1.0 + norm(p)))
        fail("singular point on conic");
    const Vec2 n = normalized(g);
    return Line{n, dot(n, p)};
}

// Slope of the chord PQ in the frame where the parabola is y = k x^2.
inline double slope_in_axis_frame(const ParabolaFrame& fr, Point p, Point q,
                                  const Tolerance& tol = {}) {
    if (fr.on_curve_residual(p) > tol.eps_iterative ||
        fr.on_curve_residual(q) > tol.eps_iterative)
        fail("point not on parabola");
    const double wp = fr.abscissa_of(p), wq = fr.abscissa_of(q);
    if (std::abs(wp - wq) <= tol.cluster_eps(std::max(std::abs(wp), std::abs(wq))))
        fail("coincident points");
    return (wp + wq) * fr.slope_coefficient();
}

struct IntersectionSet {
    // Lexicographically sorted (x, then y) points with multiplicities.
    std::vector<std::pair<Point, int>> points;

    int total_multiplicity() const {
        int m = 0;
        for (const auto& [p, k] : points) m += k;
        return m;
    }
    std::vector<Point> simple_points() const {
        std::vector<Point> out;
        for (const auto& [p, k] : points)
            if (k == 1) out.push_back(p);
        return out;
    }
};

namespace detail {

using Coeffs6 = std::array<double, 6>;

inline double eval6(const Coeffs6& v, Point p) {
    return ((v[0] * p.x + v[1] * p.y + v[3]) * p.x) + ((v[2] * p.y + v[4]) * p.y) + v[5];
}

inline Vec2 grad6(const Coeffs6& v, Point p) {
    return {2.0 * v[0] * p.x + v[1] * p.y + v[3], v[1] * p.x + 2.0 * v[2] * p.y + v[4]};
}

inline Coeffs6 normalize_max(Coeffs6 v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    if (m > 0.0)
        for (double& c : v) c /= m;
    return v;
}

using Mat3 = std::array<double, 9>; // row-major

inline Mat3 mat3_of(const Coeffs6& v) {
    return {v[0], 0.5 * v[1], 0.5 * v[3],
            0.5 * v[1], v[2], 0.5 * v[4],
            0.5 * v[3], 0.5 * v[4], v[5]};
}

inline double det3(const Mat3& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

inline Mat3 adjugate3(const Mat3& m) {
    return {m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
            m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
            m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
}

// Real zero set of a degenerate (or linear) conic.
struct DegenerateParts {
    std::vector<std::pair<Line, int>> lines; // line with multiplicity
    std::optional<Point> isolated;           // real center of a complex pair
    bool conclusive = false;                 // zero set fully described
};

inline DegenerateParts split_degenerate(const Coeffs6& raw, const Tolerance& tol) {
    const Coeffs6 v = normalize_max(raw);
    DegenerateParts out;
    const double qn = std::sqrt(v[0] * v[0] + 0.5 * v[1] * v[1] + v[2] * v[2]);
    const double ln = std::max(std::abs(v[3]), std::abs(v[4]));
    if (qn <= 1e-10 * std::max(1.0, ln)) {
        if (ln <= 1e-10) {
            // Constant: nonzero means empty zero set, zero cannot happen after
            // max normalization.
            out.conclusive = true;
            return out;
        }
        out.lines.push_back({Line::from_normal_offset({v[3], v[4]}, -v[5]), 1});
        out.conclusive = true;
        return out;
    }
    const Mat3 m = mat3_of(v);
    const Mat3 b = adjugate3(m);
    int i = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(b[k * 3 + k]) > std::abs(b[i * 3 + i])) i = k;
    const double bii = b[i * 3 + i];
    if (std::abs(bii) <= 1e-10) {
        // Rank 1: +/- l l^T, a double line.
        int j = 0;
        for (int k = 1; k < 3; ++k)
            if (std::abs(m[k * 3 + k]) > std::abs(m[j * 3 + j])) j = k;
        const double mjj = m[j * 3 + j];
        if (std::abs(mjj) <= 1e-12) return out; // not splittable
        const double s = std::sqrt(std::abs(mjj));
        const double l0 = m[j * 3 + 0] / s, l1 = m[j * 3 + 1] / s, l2 = m[j * 3 + 2] / s;
        if (std::hypot(l0, l1) <= 1e-10) return out;
        out.lines.push_back({Line::from_normal_offset({l0, l1}, -l2), 2});
        out.conclusive = true;
        return out;
    }
    const double s = std::sqrt(std::abs(bii));
    const double p0 = b[0 * 3 + i] / s, p1 = b[1 * 3 + i] / s, p2 = b[2 * 3 + i] / s;
    if (bii > 0.0) {
        // Complex line pair; the only real point is the center when affine.
        out.conclusive = true;
        if (std::abs(p2) > 1e-10) out.isolated = Point{p0 / p2, p1 / p2};
        return out;
    }
    // Rank 2 with a real split: C = M + skew(p) is rank 1 with a line in its
    // largest row and another in its largest column.
    Mat3 cm = m;
    cm[0 * 3 + 1] += p2; cm[0 * 3 + 2] += -p1;
    cm[1 * 3 + 0] += -p2; cm[1 * 3 + 2] += p0;
    cm[2 * 3 + 0] += p1; cm[2 * 3 + 1] += -p0;
    int bj = 0, bk = 0;
    double bc = -1.0;
    for (int r = 0; r < 3; ++r)
        for (int cidx = 0; cidx < 3; ++cidx)
            if (std::abs(cm[r * 3 + cidx]) > bc) {
                bc = std::abs(cm[r * 3 + cidx]);
                bj = r; bk = cidx;
            }
    if (bc <= 1e-12) return out;
    const double g0 = cm[bj * 3 + 0], g1 = cm[bj * 3 + 1], g2 = cm[bj * 3 + 2];
    const double h0 = cm[0 * 3 + bk], h1 = cm[1 * 3 + bk], h2 = cm[2 * 3 + bk];
    const bool g_affine = std::hypot(g0, g1) > 1e-10 * std::max(1.0, std::abs(g2));
    const bool h_affine = std::hypot(h0, h1) > 1e-10 * std::max(1.0, std::abs(h2));
    if (g_affine) out.lines.push_back({Line::from_normal_offset({g0, g1}, -g2), 1});
    if (h_affine) out.lines.push_back({Line::from_normal_offset({h0, h1}, -h2), 1});
    if (out.lines.size() == 2 && out.lines[0].first.same_line(out.lines[1].first, 1e-9)) {
        out.lines.pop_back();
        out.lines[0].second = 2;
    }
    out.conclusive = !out.lines.empty();
    return out;
}

inline std::vector<std::pair<Point, int>>
intersect_line_coeffs(const Line& l, const Coeffs6& v, const Tolerance& tol) {
    const Point p0 = project_point_line({0.0, 0.0}, l);
    const Vec2 d = l.direction();
    const double A = v[0] * d.x * d.x + v[1] * d.x * d.y + v[2] * d.y * d.y;
    const double B = 2.0 * v[0] * p0.x * d.x + v[1] * (p0.x * d.y + p0.y * d.x) +
                     2.0 * v[2] * p0.y * d.y + v[3] * d.x + v[4] * d.y;
    const double C = eval6(v, p0);
    std::array<double, 3> poly{C, B, A};
    const double mx = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (mx == 0.0) return {}; // line lies on the conic; caller rejects earlier
    RootSet rs = solve_polynomial(poly, tol);
    std::vector<std::pair<Point, int>> pts;
    for (const auto& r : rs.roots) pts.push_back({p0 + r.value * d, r.multiplicity});
    return pts;
}

// Magnitude of the coefficient-monomial products at p; the natural backward
// error scale for eval6.
inline double eval_scale(const Coeffs6& v, Point p) {
    const double x = std::abs(p.x), y = std::abs(p.y);
    return std::max(1.0, std::abs(v[0]) * x * x + std::abs(v[1]) * x * y +
                             std::abs(v[2]) * y * y + std::abs(v[3]) * x +
                             std::abs(v[4]) * y + std::abs(v[5]));
}

// Damped Gauss-Newton toward q1 = q2 = 0 with magnitude-scaled residuals so
// distant intersections converge as well; also safe at tangential points.
inline Point polish_intersection(const Coeffs6& c1, const Coeffs6& c2, Point p) {
    auto res2 = [&](Point q) {
        const double f1 = eval6(c1, q) / eval_scale(c1, q);
        const double f2 = eval6(c2, q) / eval_scale(c2, q);
        return f1 * f1 + f2 * f2;
    };
    double best = res2(p);
    for (int it = 0; it < 40; ++it) {
        const double m1 = eval_scale(c1, p), m2 = eval_scale(c2, p);
        const double f1 = eval6(c1, p) / m1, f2 = eval6(c2, p) / m2;
        const Vec2 g1 = grad6(c1, p) / m1, g2 = grad6(c2, p) / m2;
        // Normal equations J^T J s = -J^T f with Levenberg damping.
        const double a11 = g1.x * g1.x + g2.x * g2.x;
        const double a12 = g1.x * g1.y + g2.x * g2.y;
        const double a22 = g1.y * g1.y + g2.y * g2.y;
        const double lam = 1e-12 * (a11 + a22) + 1e-300;
        const double r1 = -(g1.x * f1 + g2.x * f2);
        const double r2 = -(g1.y * f1 + g2.y * f2);
        const double det = (a11 + lam) * (a22 + lam) - a12 * a12;
        if (det == 0.0) break;
        Vec2 step{(r1 * (a22 + lam) - a12 * r2) / det,
                  ((a11 + lam) * r2 - a12 * r1) / det};
        bool improved = false;
        for (int half = 0; half < 6; ++half) {
            Point cand = p + step;
            double r = res2(cand);
            if (r < best) {
                best = r;
                p = cand;
                improved = true;
                break;
            }
            step = step * 0.5;
        }
        if (!improved || best <= 1e-30) break;
    }
    return p;
}

inline void cluster_points(std::vector<std::pair<Point, int>>& pts, const Tolerance& tol) {
    std::vector<std::pair<Point, int>> out;
    for (const auto& [p, m] : pts) {
        bool merged = false;
        for (auto& [q, n] : out) {
            if (distance(p, q) <= tol.cluster_eps(std::max(norm(p), norm(q)))) {
                q = (q * double(n) + p * double(m)) / double(n + m);
                n += m;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back({p, m});
    }
    pts = std::move(out);
}

inline void sort_points(std::vector<std::pair<Point, int>>& pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.first.x != b.first.x) return a.first.x < b.first.x;
        return a.first.y < b.first.y;
    });
}

inline bool residuals_ok(const std::vector<std::pair<Point, int>>& pts, const Coeffs6& c1,
                         const Coeffs6& c2, const Tolerance& tol) {
    for (const auto& [p, m] : pts) {
        if (std::abs(eval6(c1, p)) > tol.eps_construct * eval_scale(c1, p)) return false;
        if (std::abs(eval6(c2, p)) > tol.eps_construct * eval_scale(c2, p)) return false;
    }
    return true;
}

// Sylvester-free resultant of two quadratics in y with polynomial coefficients
// in x; used as the fallback elimination route.
inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

inline std::vector<double> poly_sub(std::vector<double> a, const std::vector<double>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return a;
}

struct EliminationView {
    // q = A y^2 + (B1 x + B0) y + (C2 x^2 + C1 x + C0), possibly with x and y swapped.
    double A, B1, B0, C2, C1, C0;
};

inline EliminationView view_of(const Coeffs6& v, bool swap_xy) {
    if (!swap_xy) return {v[2], v[1], v[4], v[0], v[3], v[5]};
    return {v[0], v[1], v[3], v[2], v[4], v[5]};
}

inline std::vector<double> resultant_poly(const EliminationView& p, const EliminationView& q) {
    const std::vector<double> b1{p.B0, p.B1}, b2{q.B0, q.B1};
    const std::vector<double> c1{p.C0, p.C1, p.C2}, c2{q.C0, q.C1, q.C2};
    std::vector<double> ac = poly_sub(c2, {});
    for (double& x : ac) x *= p.A;
    std::vector<double> ca = poly_sub(c1, {});
    for (double& x : ca) x *= q.A;
    const std::vector<double> t1 = poly_sub(ac, ca); // A1 C2 - A2 C1 (quadratic)
    std::vector<double> ab = b2;
    for (double& x : ab) x *= p.A;
    std::vector<double> ba = b1;
    for (double& x : ba) x *= q.A;
    const std::vector<double> t2 = poly_sub(ab, ba); // A1 B2 - A2 B1 (linear)
    const std::vector<double> bc = poly_sub(poly_mul(b1, c2), poly_mul(b2, c1)); // cubic
    return poly_sub(poly_mul(t1, t1), poly_mul(t2, bc)); // quartic
}

inline std::vector<double> solve_quadratic_in_second(const EliminationView& v, double x,
                                                     const Tolerance& tol) {
    const double A = v.A;
    const double B = v.B1 * x + v.B0;
    const double C = (v.C2 * x + v.C1) * x + v.C0;
    std::array<double, 3> poly{C, B, A};
    RootSet rs = solve_polynomial(poly, tol);
    std::vector<double> ys;
    for (const auto& r : rs.roots) ys.push_back(r.value);
    return ys;
}

} // namespace detail

// All common points of two distinct conics with clustered multiplicities
// (total at most 4). Primary route: split a degenerate pencil member into
// lines and intersect those with one conic; falls back to variable
// elimination by resultant when the pencil is numerically unusable.
inline IntersectionSet intersect_conics(const Conic& q1, const Conic& q2,
                                        const Tolerance& tol = {}) {
    tol.validate();
    const auto v1 = q1.coeffs(), v2 = q2.coeffs();
    double dp = 0.0, dm = 0.0;
    for (int i = 0; i < 6; ++i) {
        dp = std::max(dp, std::abs(v1[i] - v2[i]));
        dm = std::max(dm, std::abs(v1[i] + v2[i]));
    }
    if (std::min(dp, dm) <= tol.eps_construct) fail("coincident");

    const ConicClass k1 = classify(q1, tol), k2 = classify(q2, tol);
    const bool deg1 = is_degenerate(k1), deg2 = is_degenerate(k2);

    auto finish = [&](std::vector<std::pair<Point, int>> pts) {
        detail::cluster_points(pts, tol);
        for (auto& [p, m] : pts) p = detail::polish_intersection(v1, v2, p);
        detail::cluster_points(pts, tol);
        detail::sort_points(pts);
        IntersectionSet out;
        out.points = std::move(pts);
        return out;
    };

    if (deg1 && deg2) {
        auto s1 = detail::split_degenerate(v1, tol);
        auto s2 = detail::split_degenerate(v2, tol);
        for (const auto& [la, ma] : s1.lines)
            for (const auto& [lb, mb] : s2.lines)
                if (la.same_line(lb, tol.eps_construct)) fail("shared component");
        std::vector<std::pair<Point, int>> pts;
        for (const auto& [la, ma] : s1.lines)
            for (const auto& [lb, mb] : s2.lines) {
                if (std::abs(cross(la.n, lb.n)) <= tol.eps_construct) continue;
                pts.push_back({intersect_lines(la, lb, tol), ma * mb});
            }
        auto out = finish(std::move(pts));
        if (out.total_multiplicity() > 4) fail("intersection failed");
        return out;
    }

    if (deg1 != deg2) {
        const auto& degv = deg1 ? v1 : v2;
        const auto& ndg = deg1 ? v2 : v1;
        auto sp = detail::split_degenerate(degv, tol);
        std::vector<std::pair<Point, int>> pts;
        for (const auto& [l, ml] : sp.lines)
            for (const auto& [p, m] : detail::intersect_line_coeffs(l, ndg, tol))
                pts.push_back({p, m * ml});
        if (sp.isolated && std::abs(detail::eval6(ndg, *sp.isolated)) <=
                               tol.eps_construct * (1.0 + norm2(*sp.isolated)))
            pts.push_back({*sp.isolated, 2});
        auto out = finish(std::move(pts));
        if (out.total_multiplicity() <= 4 && detail::residuals_ok(out.points, v1, v2, tol))
            return out;
        fail("intersection failed");
    }

    // Both nondegenerate: degenerate members of the pencil q1 + t q2 sit at
    // roots of the cubic det(M1 + t M2).
    const detail::Mat3 A = detail::mat3_of(v1), B = detail::mat3_of(v2);
    auto pencil_det = [&](double t) {
        detail::Mat3 m;
        for (int i = 0; i < 9; ++i) m[i] = A[i] + t * B[i];
        return detail::det3(m);
    };
    const double d0 = pencil_det(0.0), dpl = pencil_det(1.0), dmi = pencil_det(-1.0),
                 d2v = pencil_det(2.0);
    const double c0 = d0;
    const double cc2 = 0.5 * (dpl + dmi) - c0;
    const double s = 0.5 * (dpl - dmi);
    const double c3 = ((d2v - c0 - 4.0 * cc2) * 0.5 - s) / 3.0;
    const double c1 = s - c3;

    std::vector<double> member_ts;
    bool conclusive_empty = false;
    std::optional<std::pair<Point, int>> isolated_candidate;
    {
        std::array<double, 4> cubic{c0, c1, cc2, c3};
        double mx = 0.0;
        for (double c : cubic) mx = std::max(mx, std::abs(c));
        if (mx > 0.0) {
            RootSet rs = solve_polynomial(cubic, tol);
            for (const auto& r : rs.roots) member_ts.push_back(r.value);
            if (rs.degree < 3) member_ts.push_back(std::numeric_limits<double>::infinity());
        }
    }

    for (double t : member_ts) {
        detail::Coeffs6 mem;
        if (std::isinf(t)) {
            mem = v2;
        } else {
            for (int i = 0; i < 6; ++i) mem[i] = v1[i] + t * v2[i];
        }
        auto sp = detail::split_degenerate(mem, tol);
        if (!sp.conclusive) continue;
        if (sp.lines.empty()) {
            if (sp.isolated) {
                const Point p = detail::polish_intersection(v1, v2, *sp.isolated);
                const double scale = 1.0 + norm2(p);
                if (std::abs(detail::eval6(v1, p)) <= tol.eps_construct * scale &&
                    std::abs(detail::eval6(v2, p)) <= tol.eps_construct * scale) {
                    isolated_candidate = {p, 2};
                } else if (!isolated_candidate) {
                    isolated_candidate = {p, 0}; // checked, not a common point
                }
                continue;
            }
            conclusive_empty = true;
            continue;
        }
        std::vector<std::pair<Point, int>> pts;
        bool any_candidate = false;
        for (const auto& [l, ml] : sp.lines)
            for (const auto& [p, m] : detail::intersect_line_coeffs(l, v1, tol)) {
                any_candidate = true;
                const Point pp = detail::polish_intersection(v1, v2, p);
                if (detail::residuals_ok({{pp, 1}}, v1, v2, tol)) pts.push_back({pp, m * ml});
            }
        if (!any_candidate) {
            conclusive_empty = true;
            continue;
        }
        if (pts.empty()) continue; // candidates existed but none verified
        auto out = finish(std::move(pts));
        if (out.total_multiplicity() <= 4) return out;
    }
    if (isolated_candidate) {
        IntersectionSet out;
        if (isolated_candidate->second > 0) out.points.push_back(*isolated_candidate);
        return out;
    }
    if (conclusive_empty) return {};

    // Resultant fallback, eliminating whichever variable keeps the quartic
    // well scaled.
    for (bool swap_xy : {false, true}) {
        const auto pv = detail::view_of(v1, swap_xy), qv = detail::view_of(v2, swap_xy);
        std::vector<double> res = detail::resultant_poly(pv, qv);
        double mx = 0.0;
        for (double c : res) mx = std::max(mx, std::abs(c));
        if (mx == 0.0) continue;
        RootSet rs;
        try {
            rs = solve_polynomial(res, tol);
        } catch (const Error&) {
            continue;
        }
        // Polished seeds can collapse onto the same point, so merge with max
        // multiplicity instead of summing.
        std::vector<std::pair<Point, int>> pts;
        auto add_point = [&](Point p, int m) {
            for (auto& [q, n] : pts)
                if (distance(p, q) <= tol.cluster_eps(std::max(norm(p), norm(q)))) {
                    n = std::max(n, m);
                    return;
                }
            pts.push_back({p, m});
        };
        bool any_candidate = false;
        for (const auto& r : rs.roots) {
            std::vector<Point> good;
            for (double y : detail::solve_quadratic_in_second(pv, r.value, tol)) {
                any_candidate = true;
                Point p = swap_xy ? Point{y, r.value} : Point{r.value, y};
                p = detail::polish_intersection(v1, v2, p);
                if (!detail::residuals_ok({{p, 1}}, v1, v2, tol)) continue;
                bool dup = false;
                for (Point q : good)
                    if (distance(p, q) <= tol.cluster_eps(std::max(norm(p), norm(q)))) dup = true;
                if (!dup) good.push_back(p);
            }
            const int m = std::max(1, r.multiplicity / int(std::max<std::size_t>(1, good.size())));
            for (Point p : good) add_point(p, m);
        }
        if (pts.empty() && any_candidate) continue;
        detail::sort_points(pts);
        IntersectionSet out;
        out.points = std::move(pts);
        if (out.total_multiplicity() <= 4) return out;
    }
    fail("intersection failed");
}

} // namespace pq
