#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pq/harness.hpp"
#include "pq/svg.hpp"

namespace pq {

inline nlohmann::json suite_to_json(const std::vector<CheckReport>& reports,
                                    std::uint64_t seed) {
    nlohmann::json suite = nlohmann::json::array();
    for (const CheckReport& r : reports) {
        nlohmann::json failures = nlohmann::json::array();
        for (const CheckFailure& f : r.failures)
            failures.push_back({{"trial", f.trial},
                                {"residual", f.residual},
                                {"description", f.description}});
        suite.push_back({{"name", r.name},
                         {"seed", seed},
                         {"trials", r.trials_run},
                         {"rejections", r.rejections},
                         {"max_residual", r.max_residual},
                         {"failures", failures}});
    }
    return {{"suite", suite}};
}

inline std::pair<std::vector<CheckReport>, std::uint64_t> suite_from_json(
    const nlohmann::json& j) {
    std::vector<CheckReport> reports;
    std::uint64_t seed = 0;
    for (const nlohmann::json& item : j.at("suite")) {
        CheckReport r;
        r.name = item.at("name").get<std::string>();
        seed = item.at("seed").get<std::uint64_t>();
        r.trials_run = item.at("trials").get<int>();
        r.rejections = item.at("rejections").get<int>();
        r.max_residual = item.at("max_residual").get<double>();
        r.bound = check_bound(r.name);
        for (const nlohmann::json& f : item.at("failures"))
            r.failures.push_back({f.at("trial").get<int>(),
                                  f.at("residual").get<double>(),
                                  f.at("description").get<std::string>()});
        reports.push_back(std::move(r));
    }
    return {std::move(reports), seed};
}

inline const char* demo_scene_text(const std::string& name) {
    if (name == "w1")
        return "# unit circle carrying two tangent-chord parabolas whose hull has an\n"
               "# inscribed circle\n"
               "circle k = center (0, 0) radius 1\n"
               "chord c1 = k at 0.52359877559829882 2.6179938779914944\n"
               "chord c2 = k at 1.0471975511965976 -1.0471975511965976\n"
               "parabola p1 = tangent k at c1\n"
               "parabola p2 = tangent k at c2\n"
               "quad q = p1 meet p2\n"
               "incircle w = q\n";
    if (name == "w2")
        return "# equilateral chord triple around an interior point, closing into a\n"
               "# curvilinear hexagon with a near-circular inner boundary\n"
               "circle k = center (0, 0) radius 1\n"
               "ngon g = k around (0.3, 0) n 3 phase 0.4\n";
    fail("unknown demo: " + name);
}

namespace detail {

inline std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string describe_point(Point p) {
    return "(" + fmt12(p.x) + ", " + fmt12(p.y) + ")";
}

inline std::string describe_value(const SceneValue& v, const Tolerance& tol) {
    if (const auto* p = std::get_if<Point>(&v)) return "point " + describe_point(*p);
    if (const auto* c = std::get_if<Circle>(&v))
        return "circle center " + describe_point(c->center) + " radius " +
               fmt12(c->radius);
    if (const auto* ch = std::get_if<Chord>(&v))
        return "chord " + describe_point(ch->a) + " to " + describe_point(ch->b);
    if (const auto* q = std::get_if<Conic>(&v)) {
        const ParabolaFrame fr = frame_from_conic(*q, tol);
        return "parabola vertex " + describe_point(fr.vertex) + " axis " +
               describe_point(fr.axis) + " focal " + fmt12(fr.focal);
    }
    if (const auto* pq4 = std::get_if<ParabolicQuadrilateral>(&v)) {
        std::string s = "quad";
        for (Point p : pq4->vertices) s += " " + describe_point(p);
        return s;
    }
    if (const auto* ic = std::get_if<InscribedCircleResult>(&v))
        return "incircle center " + describe_point(ic->circle.center) + " radius " +
               fmt12(ic->circle.radius);
    const auto& ng = std::get<NGonResult>(v);
    return "ngon n " + std::to_string(ng.config.n) + " vertices " +
           std::to_string(ng.vertices.size()) + " closure residual " +
           fmt12(ng.residual);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Tolerance tolerance_from(const std::optional<double>& flag) {
    Tolerance tol;
    if (const char* env = std::getenv("PQ_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !std::isfinite(v) || v <= 0.0)
            fail("invalid PQ_TOL value: " + std::string(env));
        tol.eps_construct = v;
    }
    if (flag) tol.eps_construct = *flag;
    // keep the iterative bound at its default 100x ratio when loosened
    tol.eps_iterative = std::max(tol.eps_iterative, 100.0 * tol.eps_construct);
    tol.validate();
    return tol;
}

inline int run_scene(const std::string& text, const Tolerance& tol,
                     const std::optional<std::string>& render_path, std::ostream& out,
                     std::ostream& err) {
    try {
        const SceneProgram prog = parse_scene(text);
        const SceneEnvironment env = evaluate_scene(prog, tol);
        for (const SceneBinding& b : env.bindings)
            out << b.id << ": " << describe_value(b.value, tol) << "\n";
        std::vector<std::string> targets = env.render_paths;
        if (render_path) targets.push_back(*render_path);
        for (const std::string& path : targets) {
            RenderSpec spec;
            spec.path = path;
            render_svg(env, spec, tol);
            out << "rendered " << path << "\n";
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace detail

inline int cli_main(int argc, char** argv) {
    CLI::App app{"conic construction kit: tangent-chord parabolas, their hulls and checks"};
    app.require_subcommand(1);

    std::string check_name;
    int trials = 100;
    std::uint64_t seed = 42;
    std::optional<double> tol_flag;
    std::optional<std::string> json_path;
    CLI::App* check = app.add_subcommand("check", "run randomized property checks");
    check->add_option("name", check_name, "check name or 'all'")->required();
    check->add_option("--trials", trials, "trials per check")->check(CLI::PositiveNumber);
    check->add_option("--seed", seed, "master seed");
    check->add_option("--tol", tol_flag, "construction tolerance")
        ->check(CLI::PositiveNumber);
    check->add_option("--json", json_path, "write a JSON report here");

    std::string scene_path;
    std::optional<std::string> render_path;
    CLI::App* construct = app.add_subcommand("construct", "evaluate a scene file");
    construct->add_option("--scene", scene_path, "scene file (.pqs)")->required();
    construct->add_option("--render", render_path, "write an SVG here");
    construct
        ->add_option("--tol", tol_flag, "construction tolerance")
        ->check(CLI::PositiveNumber);

    std::string demo_name;
    std::optional<std::string> demo_render;
    CLI::App* demo = app.add_subcommand("demo", "run a built-in scene");
    demo->add_option("name", demo_name, "w1 or w2")
        ->required()
        ->check(CLI::IsMember({"w1", "w2"}));
    demo->add_option("--render", demo_render, "write an SVG here");
    demo->add_option("--tol", tol_flag, "construction tolerance")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Tolerance tol;
    try {
        tol = detail::tolerance_from(tol_flag);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (check->parsed()) {
        std::vector<std::string> names;
        if (check_name == "all") {
            names = check_names();
        } else {
            const auto known = check_names();
            if (std::find(known.begin(), known.end(), check_name) == known.end()) {
                std::cerr << "error: unknown check: " << check_name << "\navailable:";
                for (const std::string& n : known) std::cerr << " " << n;
                std::cerr << " all\n";
                return 2;
            }
            names.push_back(check_name);
        }
        std::vector<CheckReport> reports;
        bool ok = true;
        for (const std::string& n : names) {
            CheckConfig cfg;
            cfg.name = n;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.tol = tol;
            CheckReport r = run_check(cfg);
            const bool pass = r.failures.empty();
            ok = ok && pass;
            std::cout << (pass ? "pass" : "FAIL") << " " << r.name
                      << " trials=" << r.trials_run << " max_residual=" << std::scientific
                      << r.max_residual << std::defaultfloat << " bound=" << r.bound
                      << " rejections=" << r.rejections << "\n";
            for (const CheckFailure& f : r.failures)
                std::cout << "  trial " << f.trial << ": " << f.description
                          << " (residual " << f.residual << ")\n";
            reports.push_back(std::move(r));
        }
        if (json_path)
            detail::atomic_write_file(*json_path, suite_to_json(reports, seed).dump(2) + "\n");
        return ok ? 0 : 1;
    }

    if (construct->parsed()) {
        std::string text;
        try {
            text = detail::read_text_file(scene_path);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        return detail::run_scene(text, tol, render_path, std::cout, std::cerr);
    }

    return detail::run_scene(demo_scene_text(demo_name), tol, demo_render, std::cout,
                             std::cerr);
}

}  // namespace pq
