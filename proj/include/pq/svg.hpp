#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "pq/scene.hpp"

namespace pq {

struct RenderSpec {
    std::string path;
    int width = 1024, height = 1024;
    double margin = 0.08;  // fraction of the canvas kept clear on each side
    int density = 512;     // samples per conic polyline

    void validate() const {
        if (width <= 0 || height <= 0) fail("canvas dimensions must be positive");
        if (margin < 0.0) fail("margin must be nonnegative");
        if (margin >= 0.5) fail("margin too large");
        if (density < 64) fail("sampling density too low");
    }
};

// Points exactly on the curve between two frame abscissae. Samples are spaced
// uniformly in tangent angle, which concentrates them near the high-curvature
// vertex region.
inline std::vector<Point> sample_parabola_arc(const Conic& q, double w_lo, double w_hi,
                                              int n, const Tolerance& tol = {}) {
    if (n < 2) fail("need at least two samples");
    if (!(w_lo < w_hi)) fail("empty abscissa range");
    const ParabolaFrame fr = frame_from_conic(q, tol);
    const double th_lo = std::atan2(w_lo, 2.0 * fr.focal);
    const double th_hi = std::atan2(w_hi, 2.0 * fr.focal);
    std::vector<Point> out;
    out.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        const double th = th_lo + (th_hi - th_lo) * double(i) / double(n - 1);
        out.push_back(fr.point_at(2.0 * fr.focal * std::tan(th)));
    }
    return out;
}

namespace detail {

inline std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct Extent {
    bool any = false;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    void add(Point p) {
        if (!any) {
            x0 = x1 = p.x;
            y0 = y1 = p.y;
            any = true;
            return;
        }
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }

    void add(const Circle& c) {
        add(c.center + Vec2{c.radius, c.radius});
        add(c.center - Vec2{c.radius, c.radius});
    }
};

inline void extend_by_value(Extent& e, const SceneValue& v, const Tolerance& tol) {
    if (const auto* p = std::get_if<Point>(&v)) {
        e.add(*p);
    } else if (const auto* c = std::get_if<Circle>(&v)) {
        e.add(*c);
    } else if (const auto* ch = std::get_if<Chord>(&v)) {
        e.add(ch->a);
        e.add(ch->b);
    } else if (const auto* q = std::get_if<Conic>(&v)) {
        const ParabolaFrame fr = frame_from_conic(*q, tol);
        e.add(fr.vertex);
        const double w = 1.0 + 2.0 * fr.focal;
        e.add(fr.point_at(w));
        e.add(fr.point_at(-w));
    } else if (const auto* pq4 = std::get_if<ParabolicQuadrilateral>(&v)) {
        for (Point p : pq4->vertices) e.add(p);
    } else if (const auto* ic = std::get_if<InscribedCircleResult>(&v)) {
        e.add(ic->circle);
    } else if (const auto* ng = std::get_if<NGonResult>(&v)) {
        e.add(ng->config.circle);
        for (Point p : ng->vertices) e.add(p);
    }
}

struct Viewport {
    double cx = 0, cy = 0, scale = 1, w = 0, h = 0;

    Point to_px(Point p) const {
        return {w / 2.0 + (p.x - cx) * scale, h / 2.0 - (p.y - cy) * scale};
    }
};

inline Viewport viewport_for(const Extent& e, const RenderSpec& spec) {
    Viewport v;
    v.w = spec.width;
    v.h = spec.height;
    if (!e.any) return v;
    v.cx = 0.5 * (e.x0 + e.x1);
    v.cy = 0.5 * (e.y0 + e.y1);
    const double bw = std::max(e.x1 - e.x0, 1e-9);
    const double bh = std::max(e.y1 - e.y0, 1e-9);
    const double usable = 1.0 - 2.0 * spec.margin;
    v.scale = std::min(spec.width * usable / bw, spec.height * usable / bh);
    return v;
}

constexpr const char* kCurveStyle = "fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"";
constexpr const char* kGuideStyle = "fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"";

inline void emit_dot(std::string& out, const Viewport& vp, Point p) {
    const Point q = vp.to_px(p);
    out += "  <circle cx=\"" + fmt9(q.x) + "\" cy=\"" + fmt9(q.y) +
           "\" r=\"2\" fill=\"#000000\"/>\n";
}

inline void emit_circle(std::string& out, const Viewport& vp, const Circle& c,
                        const char* style) {
    const Point q = vp.to_px(c.center);
    out += "  <circle cx=\"" + fmt9(q.x) + "\" cy=\"" + fmt9(q.y) + "\" r=\"" +
           fmt9(c.radius * vp.scale) + "\" " + style + "/>\n";
}

inline void emit_segment(std::string& out, const Viewport& vp, Point a, Point b,
                         const char* style) {
    const Point pa = vp.to_px(a), pb = vp.to_px(b);
    out += "  <line x1=\"" + fmt9(pa.x) + "\" y1=\"" + fmt9(pa.y) + "\" x2=\"" + fmt9(pb.x) +
           "\" y2=\"" + fmt9(pb.y) + "\" " + style + "/>\n";
}

inline void emit_parabola(std::string& out, const Viewport& vp, const Extent& e,
                          const Conic& q, int density, const char* style,
                          const Tolerance& tol) {
    const ParabolaFrame fr = frame_from_conic(q, tol);
    // project the padded scene box onto the frame to find the abscissa window,
    // then cap by the ordinate actually reachable inside the box
    const double padx = 0.08 * std::max(e.x1 - e.x0, 1e-9);
    const double pady = 0.08 * std::max(e.y1 - e.y0, 1e-9);
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (double x : {e.x0 - padx, e.x1 + padx})
        for (double y : {e.y0 - pady, e.y1 + pady}) {
            const double w = fr.abscissa_of({x, y});
            lo = first ? w : std::min(lo, w);
            hi = first ? w : std::max(hi, w);
            first = false;
        }
    const double diag = std::hypot(e.x1 - e.x0 + 2.0 * padx, e.y1 - e.y0 + 2.0 * pady);
    const double eta_cap =
        distance(fr.vertex, {0.5 * (e.x0 + e.x1), 0.5 * (e.y0 + e.y1)}) + diag;
    const double w_cap = 2.0 * std::sqrt(fr.focal * std::max(eta_cap, 1e-9));
    lo = std::max(lo, -w_cap);
    hi = std::min(hi, w_cap);
    if (!(lo < hi)) return;
    out += "  <polyline " + std::string(style) + " points=\"";
    bool sep = false;
    for (Point p : sample_parabola_arc(q, lo, hi, density + 1, tol)) {
        const Point px = vp.to_px(p);
        if (sep) out += " ";
        out += fmt9(px.x) + "," + fmt9(px.y);
        sep = true;
    }
    out += "\"/>\n";
}

}  // namespace detail

inline std::string render_svg_string(const SceneEnvironment& env, const RenderSpec& spec,
                                     const Tolerance& tol = {}) {
    spec.validate();
    detail::Extent extent;
    for (const SceneBinding& b : env.bindings) detail::extend_by_value(extent, b.value, tol);
    const detail::Viewport vp = detail::viewport_for(extent, spec);

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
           "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
           std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
    for (const SceneBinding& b : env.bindings) {
        out += "<g id=\"" + b.id + "\">\n";
        if (const auto* p = std::get_if<Point>(&b.value)) {
            detail::emit_dot(out, vp, *p);
        } else if (const auto* c = std::get_if<Circle>(&b.value)) {
            detail::emit_circle(out, vp, *c, detail::kCurveStyle);
        } else if (const auto* ch = std::get_if<Chord>(&b.value)) {
            detail::emit_segment(out, vp, ch->a, ch->b, detail::kGuideStyle);
        } else if (const auto* q = std::get_if<Conic>(&b.value)) {
            detail::emit_parabola(out, vp, extent, *q, spec.density, detail::kCurveStyle, tol);
        } else if (const auto* pq4 = std::get_if<ParabolicQuadrilateral>(&b.value)) {
            detail::emit_segment(out, vp, pq4->vertices[0], pq4->vertices[2],
                                 detail::kGuideStyle);
            detail::emit_segment(out, vp, pq4->vertices[1], pq4->vertices[3],
                                 detail::kGuideStyle);
            for (Point p : pq4->vertices) detail::emit_dot(out, vp, p);
        } else if (const auto* ic = std::get_if<InscribedCircleResult>(&b.value)) {
            detail::emit_circle(out, vp, ic->circle, detail::kCurveStyle);
            for (Point p : ic->tangency_p1) detail::emit_dot(out, vp, p);
            for (Point p : ic->tangency_p2) detail::emit_dot(out, vp, p);
        } else if (const auto* ng = std::get_if<NGonResult>(&b.value)) {
            for (const Conic& pc : ng->parabolas)
                detail::emit_parabola(out, vp, extent, pc, spec.density, detail::kCurveStyle,
                                      tol);
            detail::emit_circle(out, vp, ng->fitted_circle, detail::kGuideStyle);
            for (Point p : ng->vertices) detail::emit_dot(out, vp, p);
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

namespace detail {

inline void atomic_write_file(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) fail("cannot write file: " + path);
    const std::size_t n = std::fwrite(content.data(), 1, content.size(), f);
    if (std::fclose(f) != 0 || n != content.size()) {
        std::remove(tmp.c_str());
        fail("cannot write file: " + path);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        fail("cannot write file: " + path);
    }
}

}  // namespace detail

inline void render_svg(const SceneEnvironment& env, const RenderSpec& spec,
                       const Tolerance& tol = {}) {
    detail::atomic_write_file(spec.path, render_svg_string(env, spec, tol));
}

}  // namespace pq
