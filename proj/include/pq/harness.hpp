#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pq/constructions.hpp"
#include "pq/rng.hpp"

namespace pq {

struct CheckConfig {
    std::string name;
    int trials = 100;
    std::uint64_t seed = 42;
    Tolerance tol{};
};

struct CheckFailure {
    int trial = 0;
    double residual = 0.0;
    std::string description;
};

struct CheckReport {
    std::string name;
    int trials_run = 0;
    int rejections = 0;  // degenerate instances resampled by the generators
    std::vector<CheckFailure> failures;
    double max_residual = 0.0;
    double bound = 0.0;  // failures empty iff max_residual <= bound
};

// One trial's verdict. A residual above the check's bound marks a failure; a
// thrown construction error is reported as residual 1, far above every bound.
struct TrialOutcome {
    double residual = 0.0;
    int rejections = 0;
    std::string description;
};

namespace detail {

constexpr int kRejectionCap = 1000;
constexpr double kFailHard = 1.0;

inline void spend_rejection(int& rejections) {
    if (++rejections > kRejectionCap) fail("generator rejection limit exceeded");
}

inline Line axis_line(const ParabolaFrame& fr) {
    const Vec2 n = perp(fr.axis);
    return Line::from_normal_offset(n, dot(n, fr.vertex));
}

}  // namespace detail

// Random circle with two chords whose tangent-chord parabolas cross in four
// simple points. Degenerate draws are resampled and counted.
struct CircleTwoChords {
    Circle k;
    std::array<Point, 2> chord_a, chord_b;
    Conic p1, p2;
    std::array<Point, 4> crossings;
    int rejections = 0;
};

inline CircleTwoChords gen_circle_two_chords(Rng& rng, const Tolerance& tol = {}) {
    int rejections = 0;
    const Circle k = Circle::make({rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                  rng.uniform(0.5, 2.0));
    for (;;) {
        const double a0 = rng.angle(), da = rng.uniform(1.0, 2.8);
        const Point a1 = k.at_angle(a0), a2 = k.at_angle(a0 + da);
        // cut the second chord through a point of the first well inside the
        // circle; chords meeting outside do not bound a quadrilateral with the
        // tangency points spread one per side
        const Point x = a1 + rng.uniform(0.15, 0.85) * (a2 - a1);
        const double beta = rng.angle();
        const Vec2 dir_b{std::cos(beta), std::sin(beta)};
        if (distance(x, k.center) > 0.85 * k.radius ||
            std::abs(cross(normalized(a2 - a1), dir_b)) < 0.15) {
            detail::spend_rejection(rejections);
            continue;
        }
        const auto [b1, b2] = detail::chord_endpoints(k, x, dir_b);
        double gap = 1e300;
        for (const Point& p : {a1, a2})
            for (const Point& q : {b1, b2}) gap = std::min(gap, distance(p, q));
        if (gap < 0.05 * k.radius ||
            std::abs(Line::through_points(b1, b2).signed_distance(k.center)) <
                0.05 * k.radius) {
            detail::spend_rejection(rejections);
            continue;
        }
        const Conic p1 = parabola_from_tangent_chord(k, a1, a2, tol);
        const Conic p2 = parabola_from_tangent_chord(k, b1, b2, tol);
        IntersectionSet s;
        try {
            s = intersect_conics(p1, p2, tol);
        } catch (const Error&) {
            detail::spend_rejection(rejections);
            continue;
        }
        const bool simple = s.points.size() == 4 &&
                            std::all_of(s.points.begin(), s.points.end(),
                                        [](const auto& pm) { return pm.second == 1; });
        if (!simple) {
            detail::spend_rejection(rejections);
            continue;
        }
        CircleTwoChords out{k, {a1, a2}, {b1, b2}, p1, p2, {}, rejections};
        for (std::size_t i = 0; i < 4; ++i) out.crossings[i] = s.points[i].first;
        return out;
    }
}

namespace detail {

// Two parabolas whose axes differ by a fixed angle, with four simple crossings.
struct AxisPair {
    ParabolaFrame f1, f2;
    Conic p1, p2;
    std::array<Point, 4> crossings;
    int rejections = 0;
};

inline AxisPair gen_axis_pair(Rng& rng, double angle_between, const Tolerance& tol) {
    int rejections = 0;
    for (;;) {
        ParabolaFrame f1;
        const double th = rng.angle();
        f1.vertex = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        f1.axis = {std::cos(th), std::sin(th)};
        f1.focal = rng.uniform(0.25, 1.0);
        // pick three points on the first parabola and fit the unique conic with
        // the requested axis direction through them; three shared real points
        // force the fourth crossing to be real as well, so no blind search
        std::array<double, 3> w;
        for (double& v : w) v = rng.uniform(-2.2, 2.2);
        if (std::abs(w[0] - w[1]) < 0.3 || std::abs(w[0] - w[2]) < 0.3 ||
            std::abs(w[1] - w[2]) < 0.3) {
            spend_rejection(rejections);
            continue;
        }
        const Vec2 v{std::cos(th + angle_between), std::sin(th + angle_between)};
        const Vec2 u = perp(v);
        // solve xi^2 + d xi + e eta + f = 0 at the three points, coordinates
        // (xi, eta) = (u . p, v . p)
        double a[3][3], rhs[3];
        for (std::size_t i = 0; i < 3; ++i) {
            const Point p = f1.point_at(w[i]);
            a[i][0] = dot(u, p);
            a[i][1] = dot(v, p);
            a[i][2] = 1.0;
            rhs[i] = -a[i][0] * a[i][0];
        }
        const double det = a[0][0] * (a[1][1] - a[2][1]) - a[0][1] * (a[1][0] - a[2][0]) +
                           (a[1][0] * a[2][1] - a[2][0] * a[1][1]);
        if (std::abs(det) < 1e-6) {
            spend_rejection(rejections);
            continue;
        }
        double sol[3];
        for (int c = 0; c < 3; ++c) {
            double m[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    m[i][j] = (j == c) ? rhs[i] : a[i][j];
            sol[c] = (m[0][0] * (m[1][1] * m[2][2] - m[2][1] * m[1][2]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[2][0] * m[1][2]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[2][0] * m[1][1])) /
                     det;
        }
        const Conic p1 = conic_from_frame(f1, tol);
        Conic p2;
        ParabolaFrame f2;
        try {
            p2 = Conic::from_coefficients(u.x * u.x, 2.0 * u.x * u.y, u.y * u.y,
                                          sol[0] * u.x + sol[1] * v.x,
                                          sol[0] * u.y + sol[1] * v.y, sol[2], {}, tol);
            f2 = frame_from_conic(p2, tol);
        } catch (const Error&) {
            spend_rejection(rejections);
            continue;
        }
        if (f2.focal < 0.02 || f2.focal > 50.0) {
            spend_rejection(rejections);
            continue;
        }
        IntersectionSet s;
        try {
            s = intersect_conics(p1, p2, tol);
        } catch (const Error&) {
            spend_rejection(rejections);
            continue;
        }
        const bool simple = s.points.size() == 4 &&
                            std::all_of(s.points.begin(), s.points.end(),
                                        [](const auto& pm) { return pm.second == 1; });
        if (!simple) {
            spend_rejection(rejections);
            continue;
        }
        double near = 1e300, spread = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) {
                const double d = distance(s.points[i].first, s.points[j].first);
                near = std::min(near, d);
                spread = std::max(spread, d);
            }
        if (near < 0.05 * spread) {
            spend_rejection(rejections);
            continue;
        }
        AxisPair out{f1, f2, p1, p2, {}, rejections};
        for (std::size_t i = 0; i < 4; ++i) out.crossings[i] = s.points[i].first;
        return out;
    }
}

// Distinct frame abscissae with a minimum gap, for points on one parabola.
inline std::array<double, 4> gen_abscissae(Rng& rng, int& rejections) {
    for (;;) {
        std::array<double, 4> w;
        for (double& v : w) v = rng.uniform(-2.5, 2.5);
        double gap = 1e300;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                gap = std::min(gap, std::abs(w[std::size_t(i)] - w[std::size_t(j)]));
        if (gap >= 0.2) return w;
        spend_rejection(rejections);
    }
}

inline TrialOutcome trial_main_forward(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    const CircleTwoChords g = gen_circle_two_chords(rng, cfg.tol);
    out.rejections = g.rejections;
    try {
        const ParabolicQuadrilateral pq = parabolic_quadrilateral(g.p1, g.p2, cfg.tol);
        out.residual = perpendicular_diagonals_residual(pq);
        if (out.residual > 1e-8) out.description = "diagonal perpendicularity residual exceeds bound";
    } catch (const Error& e) {
        out.residual = kFailHard;
        out.description = e.what();
    }
    return out;
}

inline TrialOutcome trial_main_backward(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    // positive direction: perpendicular diagonals admit an inscribed circle
    for (;;) {
        const double th = rng.angle();
        const Vec2 u{std::cos(th), std::sin(th)}, w = perp(u);
        const Point l{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Point a = l + rng.uniform(0.5, 2.0) * u, c = l - rng.uniform(0.5, 2.0) * u;
        const Point b = l + rng.uniform(0.5, 2.0) * w, d = l - rng.uniform(0.5, 2.0) * w;
        const FourPointParabolas fp = parabolas_through_four_points(a, b, c, d, cfg.tol);
        if (fp.parabolas.size() < 2) {
            spend_rejection(out.rejections);
            continue;
        }
        try {
            const ParabolicQuadrilateral pq =
                parabolic_quadrilateral(fp.parabolas[0], fp.parabolas[1], cfg.tol);
            const InscribedCircleResult res = inscribed_circle(pq, cfg.tol);
            out.residual = std::max(res.certificates[0], res.certificates[1]);
            if (out.residual > 1e-6) out.description = "tangency certificate exceeds bound";
        } catch (const Error& e) {
            out.residual = kFailHard;
            out.description = e.what();
        }
        break;
    }
    if (out.residual >= kFailHard) return out;
    // negative control: a skewed second diagonal must be refused with margin
    for (;;) {
        const double th = rng.angle();
        const double sign = rng.pick(2) == 0 ? 1.0 : -1.0;
        const double skew =
            sign * rng.uniform(std::numbers::pi / 18.0, 4.0 * std::numbers::pi / 9.0);
        const Vec2 u{std::cos(th), std::sin(th)};
        const Vec2 w{std::cos(th + std::numbers::pi / 2.0 + skew),
                     std::sin(th + std::numbers::pi / 2.0 + skew)};
        const Point l{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Point a = l + rng.uniform(0.5, 2.0) * u, c = l - rng.uniform(0.5, 2.0) * u;
        const Point b = l + rng.uniform(0.5, 2.0) * w, d = l - rng.uniform(0.5, 2.0) * w;
        const FourPointParabolas fp = parabolas_through_four_points(a, b, c, d, cfg.tol);
        if (fp.parabolas.size() < 2) {
            spend_rejection(out.rejections);
            continue;
        }
        try {
            const ParabolicQuadrilateral pq =
                parabolic_quadrilateral(fp.parabolas[0], fp.parabolas[1], cfg.tol);
            if (perpendicular_diagonals_residual(pq) < 1e-3) {
                out.residual = kFailHard;
                out.description = "negative control margin below 1e-3";
                break;
            }
            inscribed_circle(pq, cfg.tol);
            out.residual = kFailHard;
            out.description = "negative control produced an inscribed circle";
        } catch (const Error&) {
            // expected refusal
        }
        break;
    }
    return out;
}

inline TrialOutcome trial_lemma1(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    const Circle k = Circle::make({rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                  rng.uniform(0.5, 2.0));
    const double a0 = rng.angle(), da = rng.uniform(0.3, 2.8);
    const Point a = k.at_angle(a0), b = k.at_angle(a0 + da);
    const Conic q = parabola_from_tangent_chord(k, a, b, cfg.tol);
    const Line chord = Line::through_points(a, b);
    const ParabolaFrame fr = frame_from_conic(q, cfg.tol);
    for (int i = 0; i < 20; ++i) {
        const Point p = fr.point_at(rng.uniform(-3, 3) * std::max(1.0, k.radius));
        const double scale = std::max(1.0, distance(p, k.center));
        out.residual = std::max(out.residual, lemma1_residual(q, k, chord, p, cfg.tol) / scale);
        const Point off = p + (0.01 * scale) * normalized(q.gradient(p));
        if (lemma1_residual(q, k, chord, off, cfg.tol) < 1e-4 * scale) {
            out.residual = kFailHard;
            out.description = "off-curve point passes the locus identity";
            return out;
        }
    }
    if (out.residual > 1e-10) out.description = "locus identity residual exceeds bound";
    return out;
}

inline TrialOutcome trial_lemma2(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    ParabolaFrame fr;
    const double th = rng.angle();
    fr.vertex = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    fr.axis = {std::cos(th), std::sin(th)};
    fr.focal = rng.uniform(0.25, 1.0);
    const double xi0 = rng.uniform(0.5, 2.0);
    const double w0 = 2.0 * std::sqrt(fr.focal * xi0);
    const Point a = fr.point_at(-w0), b = fr.point_at(w0);
    const double scale = std::max(1.0, norm(fr.vertex - Point{0, 0}) + xi0 + 4.0 * fr.focal);

    double c_lo = 1e300, c_hi = -1e300;
    Point center_ref{};
    double center_spread = 0.0, radius_lo = 1e300, radius_hi = -1e300;
    Circle omega_ref = Circle::make({0, 0}, 1);
    try {
        for (int i = 0; i < 20; ++i) {
            double u;
            do {
                u = rng.uniform(-3.0, 3.0);
            } while (std::abs(std::abs(u) - 1.0) < 0.1);
            const Lemma2Figure fig = lemma2_points(fr, xi0, fr.point_at(u * w0), cfg.tol);
            const double ord = fr.ordinate_of(fig.c);
            c_lo = std::min(c_lo, ord);
            c_hi = std::max(c_hi, ord);
            // the circle through the chord ends and one foot must not move with p
            Circle through;
            try {
                through = circle_through_three(a, b, fig.k, cfg.tol);
            } catch (const Error&) {
                through = circle_through_three(a, b, fig.l, cfg.tol);
            }
            if (i == 0) {
                center_ref = through.center;
                omega_ref = fig.omega;
            }
            center_spread = std::max(center_spread, distance(through.center, center_ref));
            radius_lo = std::min(radius_lo, through.radius);
            radius_hi = std::max(radius_hi, through.radius);
        }
        double cert = 0.0;
        const auto contacts =
            certified_tangency(conic_from_frame(fr, cfg.tol), omega_ref, &cert, cfg.tol);
        const double contact_gap =
            std::max(std::min(distance(contacts[0], a), distance(contacts[0], b)),
                     std::min(distance(contacts[1], a), distance(contacts[1], b)));
        out.residual = std::max({(c_hi - c_lo) / scale, center_spread / scale,
                                 (radius_hi - radius_lo) / scale, cert * 10.0,
                                 contact_gap / scale * 1e-4});
        if (out.residual > 1e-9)
            out.description = "meet-line or tangent-circle drift exceeds bound";
    } catch (const Error& e) {
        out.residual = kFailHard;
        out.description = e.what();
    }
    return out;
}

inline TrialOutcome trial_corollary1(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    const CircleTwoChords g = gen_circle_two_chords(rng, cfg.tol);
    out.rejections = g.rejections;
    AffineMap m;
    do {
        m = AffineMap::linear(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                              rng.uniform(-2, 2));
    } while (std::abs(m.det()) < 0.3);
    m.t = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    try {
        const Conic q1 = transform_conic(m, g.p1, cfg.tol);
        const Conic q2 = transform_conic(m, g.p2, cfg.tol);
        const ParabolicQuadrilateral skew = parabolic_quadrilateral(q1, q2, cfg.tol);
        const AffineMap n = affine_normalizer(skew, cfg.tol);
        const Conic r1 = transform_conic(n, q1, cfg.tol);
        const Conic r2 = transform_conic(n, q2, cfg.tol);
        const ParabolicQuadrilateral img = parabolic_quadrilateral(r1, r2, cfg.tol);
        const Vec2 u1 = frame_from_conic(r1, cfg.tol).axis;
        const Vec2 u2 = frame_from_conic(r2, cfg.tol).axis;
        const InscribedCircleResult res = inscribed_circle(img, cfg.tol);
        out.residual = std::max({std::abs(dot(u1, u2)), perpendicular_diagonals_residual(img),
                                 concyclicity_residual(img.vertices[0], img.vertices[1],
                                                       img.vertices[2], img.vertices[3],
                                                       cfg.tol),
                                 res.certificates[0] * 0.1, res.certificates[1] * 0.1});
        if (out.residual > 1e-7) out.description = "normalized image fails a right-angle or circle gate";
    } catch (const Error& e) {
        out.residual = kFailHard;
        out.description = e.what();
    }
    return out;
}

inline TrialOutcome trial_corollary2(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    ParabolaFrame fr;
    const double th = rng.angle();
    fr.vertex = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    fr.axis = {std::cos(th), std::sin(th)};
    fr.focal = rng.uniform(0.25, 1.0);
    for (;;) {
        const auto w = gen_abscissae(rng, out.rejections);
        const Point a = fr.point_at(w[0]), b = fr.point_at(w[1]), c = fr.point_at(w[2]);
        FourthIntersection fi;
        try {
            fi = fourth_intersection(fr, a, b, c, cfg.tol);
        } catch (const Error&) {
            spend_rejection(out.rejections);
            continue;
        }
        double dgap = 1e300;
        for (int i = 0; i < 3; ++i)
            dgap = std::min(dgap, std::abs(fi.abscissa - w[std::size_t(i)]));
        if (fi.tangential || dgap < 0.2) {
            spend_rejection(out.rejections);
            continue;
        }
        const double kab = slope_in_axis_frame(fr, a, b, cfg.tol);
        const double kcd = slope_in_axis_frame(fr, c, fi.point, cfg.tol);
        const Vec2 d1 = normalized(b - a), d2 = normalized(fi.point - c);
        double bis = 1e300;
        for (const Vec2 cand : {d1 + d2, d1 - d2})
            if (norm(cand) > 1e-9) bis = std::min(bis, std::abs(cross(normalized(cand), fr.axis)));
        out.residual = std::max(std::abs(kab + kcd), 0.1 * bis);
        if (out.residual > 1e-9) out.description = "chord slopes not mirrored about the axis";
        return out;
    }
}

inline TrialOutcome trial_corollary3(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    const AxisPair g = gen_axis_pair(rng, std::numbers::pi / 2.0, cfg.tol);
    out.rejections = g.rejections;
    Point centroid{0, 0};
    for (Point p : g.crossings) centroid = centroid + p;
    centroid = centroid / 4.0;
    double scale = 1.0;
    for (Point p : g.crossings) scale = std::max(scale, distance(p, centroid));
    try {
        const Point meet = intersect_lines(axis_line(g.f1), axis_line(g.f2), cfg.tol);
        out.residual = distance(meet, centroid) / scale;
    } catch (const Error& e) {
        out.residual = kFailHard;
        out.description = e.what();
    }
    if (out.residual > 1e-8 && out.description.empty())
        out.description = "axes do not meet at the crossing centroid";
    return out;
}

inline TrialOutcome trial_corollary4(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    ParabolaFrame fr;
    const double th = rng.angle();
    fr.vertex = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    fr.axis = {std::cos(th), std::sin(th)};
    fr.focal = rng.uniform(0.25, 1.0);
    for (;;) {
        const auto w = gen_abscissae(rng, out.rejections);
        AxialLinesResult res;
        try {
            res = axial_lines(fr.point_at(w[0]), fr.point_at(w[1]), fr.point_at(w[2]),
                              fr.point_at(w[3]), cfg.tol);
        } catch (const Error&) {
            spend_rejection(out.rejections);
            continue;
        }
        if (res.solutions.empty()) {
            spend_rejection(out.rejections);
            continue;
        }
        out.residual = 1e300;
        for (const auto& sol : res.solutions)
            out.residual = std::min(out.residual,
                                    std::abs(cross(normalized(sol.line.direction()), fr.axis)));
        if (out.residual > 1e-8) out.description = "no axial line parallel to the axis";
        return out;
    }
}

inline TrialOutcome trial_axes_perp_iff_concyclic(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    const AxisPair fwd = gen_axis_pair(rng, std::numbers::pi / 2.0, cfg.tol);
    out.rejections = fwd.rejections;
    try {
        out.residual = concyclicity_residual(fwd.crossings[0], fwd.crossings[1],
                                             fwd.crossings[2], fwd.crossings[3], cfg.tol);
        if (out.residual > 1e-8) out.description = "perpendicular axes give non-concyclic crossings";
    } catch (const Error& e) {
        out.residual = kFailHard;
        out.description = e.what();
    }
    if (out.residual >= kFailHard) return out;
    // reverse control: four points pushed off a circle by 5..30 percent of the
    // radius give a parabola pair with visibly skewed axes, and the detector
    // must flag their crossings as non-concyclic with margin
    for (;;) {
        const Circle k = Circle::make({rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                      rng.uniform(0.5, 2.0));
        std::array<double, 4> ts;
        for (double& t : ts) t = rng.angle();
        double gap = 1e300;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const double d = std::abs(ts[std::size_t(i)] - ts[std::size_t(j)]);
                gap = std::min(gap, std::min(d, 2.0 * std::numbers::pi - d));
            }
        if (gap < 0.4) {
            spend_rejection(out.rejections);
            continue;
        }
        const double sign = rng.pick(2) == 0 ? 1.0 : -1.0;
        const double rho = sign * rng.uniform(0.05, 0.3);
        std::array<Point, 4> pts;
        for (std::size_t i = 0; i < 4; ++i) pts[i] = k.at_angle(ts[i]);
        pts[3] = k.center + (1.0 + rho) * (pts[3] - k.center);
        FourPointParabolas fp;
        try {
            fp = parabolas_through_four_points(pts[0], pts[1], pts[2], pts[3], cfg.tol);
        } catch (const Error&) {
            spend_rejection(out.rejections);
            continue;
        }
        if (fp.parabolas.size() < 2) {
            spend_rejection(out.rejections);
            continue;
        }
        double ang = 0.0;
        IntersectionSet s;
        try {
            ang = direction_angle(frame_from_conic(fp.parabolas[0], cfg.tol).axis,
                                  frame_from_conic(fp.parabolas[1], cfg.tol).axis);
            s = intersect_conics(fp.parabolas[0], fp.parabolas[1], cfg.tol);
        } catch (const Error&) {
            spend_rejection(out.rejections);
            continue;
        }
        if (ang < std::numbers::pi / 18.0 || ang > 4.0 * std::numbers::pi / 9.0 ||
            s.points.size() != 4 || s.total_multiplicity() != 4) {
            spend_rejection(out.rejections);
            continue;
        }
        // fit through the widest triple so the reported defect is not an
        // artifact of a thin circumcircle
        double best_area = -1.0;
        double r = 0.0;
        for (std::size_t skip = 0; skip < 4; ++skip) {
            std::array<Point, 3> t;
            std::size_t n = 0;
            for (std::size_t i = 0; i < 4; ++i)
                if (i != skip) t[n++] = s.points[i].first;
            const double area = std::abs(cross(t[1] - t[0], t[2] - t[0]));
            if (area > best_area) {
                best_area = area;
                r = concyclicity_residual(t[0], t[1], t[2], s.points[skip].first, cfg.tol);
            }
        }
        if (r < 1e-3) {
            out.residual = kFailHard;
            out.description = "skewed-axes control is nearly concyclic";
        }
        return out;
    }
}

inline TrialOutcome trial_statement1(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    const Circle k = Circle::make({rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                  rng.uniform(0.5, 2.0));
    for (;;) {
        std::array<std::pair<Point, Point>, 3> chords;
        std::array<Line, 3> ls;
        for (int j = 0; j < 3; ++j) {
            const double phi = rng.uniform(-0.45, 0.45) + 2.0 * std::numbers::pi * j / 3.0;
            const double dist = rng.uniform(0.05, 0.35) * k.radius;
            const Vec2 n{std::cos(phi), std::sin(phi)};
            const Point base = k.center + dist * n;
            const Vec2 along = perp(n) * std::sqrt(k.radius * k.radius - dist * dist);
            chords[std::size_t(j)] = {base + along, base - along};
            ls[std::size_t(j)] = Line::from_normal_offset(n, dot(n, base));
        }
        double far = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                far = std::max(far, distance(intersect_lines(ls[std::size_t(i)],
                                                             ls[std::size_t(j)], cfg.tol),
                                             k.center));
        // past ~0.65r a parabola pair's outer crossings join the region too and
        // the curvilinear hexagon stops existing
        if (far >= 0.6 * k.radius) {
            spend_rejection(out.rejections);
            continue;
        }
        try {
            const ConcurrencyResult res = hexagon_diagonal_concurrency(k, chords, cfg.tol);
            const Point inc = triangle_incenter(intersect_lines(ls[1], ls[2], cfg.tol),
                                                intersect_lines(ls[0], ls[2], cfg.tol),
                                                intersect_lines(ls[0], ls[1], cfg.tol), cfg.tol);
            out.residual = std::max(res.residual,
                                    0.1 * distance(res.point, inc) / std::max(1.0, k.radius));
            if (out.residual > 1e-8) out.description = "diagonals miss a common incenter point";
        } catch (const Error& e) {
            out.residual = kFailHard;
            out.description = e.what();
        }
        return out;
    }
}

inline TrialOutcome trial_az(const CheckConfig& cfg, int trial) {
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(trial));
    TrialOutcome out;
    const Circle k = Circle::make({rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                  rng.uniform(0.5, 2.0));
    const double phi = rng.angle();
    const Point x = k.center + (rng.uniform(0.05, 0.8) * k.radius) * Vec2{std::cos(phi),
                                                                          std::sin(phi)};
    const double theta0 = rng.angle();
    try {
        for (int n = 2; n <= 5; ++n) {
            const NGonResult res = build_ngon(k, x, n, theta0, cfg.tol);
            out.residual = std::max(out.residual, res.residual);
            if (n == 2) {
                const ParabolicQuadrilateral pq =
                    parabolic_quadrilateral(res.parabolas[0], res.parabolas[1], cfg.tol);
                const InscribedCircleResult ins = inscribed_circle(pq, cfg.tol);
                out.residual = std::max({out.residual, perpendicular_diagonals_residual(pq),
                                         ins.certificates[0] * 0.1, ins.certificates[1] * 0.1});
            }
        }
        if (out.residual > 1e-7) out.description = "fan vertices drift off the fitted circle";
    } catch (const Error& e) {
        out.residual = kFailHard;
        out.description = e.what();
    }
    return out;
}

struct CheckDef {
    const char* name;
    double bound;
    TrialOutcome (*run)(const CheckConfig&, int);
};

inline const std::array<CheckDef, 11>& check_table() {
    static const std::array<CheckDef, 11> defs{{
        {"main_forward", 1e-8, &trial_main_forward},
        {"main_backward", 1e-6, &trial_main_backward},
        {"lemma1", 1e-10, &trial_lemma1},
        {"lemma2", 1e-9, &trial_lemma2},
        {"corollary1", 1e-7, &trial_corollary1},
        {"corollary2", 1e-9, &trial_corollary2},
        {"corollary3", 1e-8, &trial_corollary3},
        {"corollary4", 1e-8, &trial_corollary4},
        {"axes_perp_iff_concyclic", 1e-8, &trial_axes_perp_iff_concyclic},
        {"statement1", 1e-8, &trial_statement1},
        {"az", 1e-7, &trial_az},
    }};
    return defs;
}

inline const CheckDef& find_check(const std::string& name) {
    for (const auto& d : check_table())
        if (name == d.name) return d;
    fail("unknown check: " + name);
}

}  // namespace detail

inline std::vector<std::string> check_names() {
    std::vector<std::string> out;
    for (const auto& d : detail::check_table()) out.emplace_back(d.name);
    return out;
}

inline double check_bound(const std::string& name) { return detail::find_check(name).bound; }

// One trial of the named check; pure in (seed, trial), safe to run in any order.
inline TrialOutcome trial_outcome(const CheckConfig& cfg, int trial) {
    return detail::find_check(cfg.name).run(cfg, trial);
}

inline CheckReport run_check(const CheckConfig& cfg) {
    if (cfg.trials < 1) fail("trials must be positive");
    cfg.tol.validate();
    const detail::CheckDef& def = detail::find_check(cfg.name);
    CheckReport rep;
    rep.name = cfg.name;
    rep.bound = def.bound;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const TrialOutcome o = def.run(cfg, trial);
        ++rep.trials_run;
        rep.rejections += o.rejections;
        rep.max_residual = std::max(rep.max_residual, o.residual);
        if (o.residual > def.bound)
            rep.failures.push_back(
                {trial, o.residual,
                 o.description.empty() ? "residual exceeds bound" : o.description});
    }
    return rep;
}

inline std::vector<CheckReport> run_all(std::span<const CheckConfig> configs) {
    std::vector<CheckReport> out;
    out.reserve(configs.size());
    for (const CheckConfig& cfg : configs) out.push_back(run_check(cfg));
    return out;
}

inline std::vector<CheckConfig> default_suite(int trials = 100, std::uint64_t seed = 42) {
    std::vector<CheckConfig> cfgs;
    for (const auto& d : detail::check_table()) cfgs.push_back({d.name, trials, seed, {}});
    return cfgs;
}

inline CheckReport check_main_forward(CheckConfig cfg) { cfg.name = "main_forward"; return run_check(cfg); }
inline CheckReport check_main_backward(CheckConfig cfg) { cfg.name = "main_backward"; return run_check(cfg); }
inline CheckReport check_lemma1(CheckConfig cfg) { cfg.name = "lemma1"; return run_check(cfg); }
inline CheckReport check_lemma2(CheckConfig cfg) { cfg.name = "lemma2"; return run_check(cfg); }
inline CheckReport check_corollary1(CheckConfig cfg) { cfg.name = "corollary1"; return run_check(cfg); }
inline CheckReport check_corollary2(CheckConfig cfg) { cfg.name = "corollary2"; return run_check(cfg); }
inline CheckReport check_corollary3(CheckConfig cfg) { cfg.name = "corollary3"; return run_check(cfg); }
inline CheckReport check_corollary4(CheckConfig cfg) { cfg.name = "corollary4"; return run_check(cfg); }
inline CheckReport check_axes_perp_iff_concyclic(CheckConfig cfg) { cfg.name = "axes_perp_iff_concyclic"; return run_check(cfg); }
inline CheckReport check_statement1(CheckConfig cfg) { cfg.name = "statement1"; return run_check(cfg); }
inline CheckReport check_az(CheckConfig cfg) { cfg.name = "az"; return run_check(cfg); }

}  // namespace pq
