#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pq/svg.hpp"

using namespace pq;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

SceneEnvironment quad_env() {
    const char* text =
        "circle k = center (0, 0) radius 1\n"
        "chord c1 = k at 0.52359877559829882 2.6179938779914944\n"
        "chord c2 = k at 1.0471975511965976 -1.0471975511965976\n"
        "parabola p1 = tangent k at c1\n"
        "parabola p2 = tangent k at c2\n"
        "quad q = p1 meet p2\n"
        "incircle w = q\n";
    return evaluate_scene(parse_scene(text));
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("render spec rejects unusable parameters") {
    RenderSpec spec;
    spec.width = 0;
    CHECK_THROWS_MATCHES(spec.validate(), Error,
                         MessageMatches(ContainsSubstring("canvas dimensions must be positive")));
    spec = {};
    spec.margin = 0.5;
    CHECK_THROWS_MATCHES(spec.validate(), Error,
                         MessageMatches(ContainsSubstring("margin too large")));
    spec = {};
    spec.margin = -0.1;
    CHECK_THROWS_MATCHES(spec.validate(), Error,
                         MessageMatches(ContainsSubstring("margin must be nonnegative")));
    spec = {};
    spec.density = 63;
    CHECK_THROWS_MATCHES(spec.validate(), Error,
                         MessageMatches(ContainsSubstring("sampling density too low")));
    spec = {};
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("rendering is deterministic byte for byte") {
    const SceneEnvironment env = quad_env();
    RenderSpec spec;
    const std::string a = render_svg_string(env, spec);
    const std::string b = render_svg_string(env, spec);
    CHECK(a == b);
    CHECK(a.rfind("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
}

TEST_CASE("empty environment renders a valid empty canvas") {
    const SceneEnvironment env;
    RenderSpec spec;
    const std::string s = render_svg_string(env, spec);
    CHECK_THAT(s, ContainsSubstring("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    CHECK_THAT(s, ContainsSubstring("</svg>"));
    CHECK(count_occurrences(s, "<g ") == 0);
}

TEST_CASE("one group per binding in insertion order") {
    const SceneEnvironment env = quad_env();
    RenderSpec spec;
    const std::string s = render_svg_string(env, spec);
    CHECK(count_occurrences(s, "<g id=") == env.bindings.size());
    std::size_t last = 0;
    for (const SceneBinding& b : env.bindings) {
        const std::size_t pos = s.find("<g id=\"" + b.id + "\">");
        REQUIRE(pos != std::string::npos);
        CHECK(pos > last);
        last = pos;
    }
    // two tangent-chord parabolas, each one polyline of density+1 points
    CHECK(count_occurrences(s, "<polyline") == 2);
    const std::size_t p = s.find("points=\"");
    REQUIRE(p != std::string::npos);
    const std::string pts = s.substr(p + 8, s.find('"', p + 8) - p - 8);
    CHECK(count_occurrences(pts, ",") == std::size_t(spec.density) + 1);
}

TEST_CASE("sampled arc points lie on the curve") {
    const SceneEnvironment env = quad_env();
    const Conic& q = std::get<Conic>(env.at("p1"));
    const auto pts = sample_parabola_arc(q, -3.0, 3.0, 1000);
    REQUIRE(pts.size() == 1000);
    double scale = 0.0;
    for (double c : q.coeffs()) scale = std::max(scale, std::abs(c));
    double worst = 0.0;
    for (Point p : pts) {
        const double m = std::max({1.0, p.x * p.x, p.y * p.y});
        worst = std::max(worst, std::abs(q.evaluate(p)) / (scale * m));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("arc sampling concentrates points where curvature is high") {
    const Conic q = Conic::from_coefficients(1, 0, 0, 0, -1, 0);  // vertical axis, vertex origin
    const auto pts = sample_parabola_arc(q, -4.0, 4.0, 257);
    const std::size_t mid = pts.size() / 2;
    const double near_vertex = distance(pts[mid], pts[mid + 1]);
    const double at_end = distance(pts[0], pts[1]);
    CHECK(near_vertex < 0.5 * at_end);
}

TEST_CASE("arc sampling rejects empty or trivial requests") {
    const Conic q = Conic::from_coefficients(1, 0, 0, 0, -1, 0);
    CHECK_THROWS_MATCHES(sample_parabola_arc(q, 1.0, 1.0, 16), Error,
                         MessageMatches(ContainsSubstring("empty abscissa range")));
    CHECK_THROWS_MATCHES(sample_parabola_arc(q, -1.0, 1.0, 1), Error,
                         MessageMatches(ContainsSubstring("need at least two samples")));
}

TEST_CASE("render_svg writes atomically and reproducibly") {
    const SceneEnvironment env = quad_env();
    const auto dir = std::filesystem::temp_directory_path();
    RenderSpec spec;
    spec.path = (dir / "pq_svg_test.svg").string();
    render_svg(env, spec);
    CHECK(!std::filesystem::exists(spec.path + ".tmp"));
    std::ifstream in(spec.path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == render_svg_string(env, spec));
    render_svg(env, spec);  // overwrite in place
    std::ifstream in2(spec.path, std::ios::binary);
    std::ostringstream ss2;
    ss2 << in2.rdbuf();
    CHECK(ss2.str() == ss.str());
    std::filesystem::remove(spec.path);
}

TEST_CASE("numbers are emitted with nine significant digits") {
    const SceneEnvironment env = quad_env();
    RenderSpec spec;
    const std::string s = render_svg_string(env, spec);
    // a pixel coordinate with more than 10 significant digits would betray
    // platform-dependent formatting
    std::size_t pos = s.find("cx=\"");
    REQUIRE(pos != std::string::npos);
    const std::string num = s.substr(pos + 4, s.find('"', pos + 4) - pos - 4);
    std::size_t digits = 0;
    for (char c : num)
        if (c >= '0' && c <= '9') ++digits;
    CHECK(digits <= 9);
}
