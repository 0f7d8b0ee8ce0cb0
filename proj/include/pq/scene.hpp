#pragma once

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pq/constructions.hpp"

namespace pq {

// One construction-script statement. Payload slots are shared across kinds:
// nums carries literal coordinates, ival the pick index or polygon count,
// refs the referenced identifiers in grammar order.
struct SceneStatement {
    enum class Kind {
        point,
        circle,
        chord,
        parabola_tangent,
        parabola_through,
        quad,
        incircle,
        ngon,
        render,
    };

    Kind kind = Kind::point;
    int line = 1, col = 1;
    std::string id;
    std::array<double, 3> nums{};
    int ival = 0;
    std::vector<std::string> refs;
    std::string path;

    friend bool operator==(const SceneStatement& a, const SceneStatement& b) {
        return a.kind == b.kind && a.id == b.id && a.nums == b.nums && a.ival == b.ival &&
               a.refs == b.refs && a.path == b.path;
    }
};

struct SceneProgram {
    std::vector<SceneStatement> statements;

    friend bool operator==(const SceneProgram& a, const SceneProgram& b) {
        return a.statements == b.statements;
    }
};

namespace detail {

struct Token {
    std::string text;
    int line = 1, col = 1;
    bool is_string = false;
    bool is_end = false;
};

[[noreturn]] inline void fail_at(int line, int col, const std::string& msg) {
    fail(std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

inline bool is_word_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '#' && c != '(' &&
           c != ')' && c != ',' && c != '=' && c != '"';
}

inline std::vector<Token> tokenize_scene(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    const auto step = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            step(c);
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') {
                step(text[i]);
                ++i;
            }
            continue;
        }
        if (c == '(' || c == ')' || c == ',' || c == '=') {
            out.push_back({std::string(1, c), line, col, false, false});
            step(c);
            ++i;
            continue;
        }
        if (c == '"') {
            const int sl = line, sc = col;
            step(c);
            ++i;
            std::string body;
            while (i < text.size() && text[i] != '"' && text[i] != '\n') {
                body.push_back(text[i]);
                step(text[i]);
                ++i;
            }
            if (i >= text.size() || text[i] != '"') fail_at(sl, sc, "unterminated string");
            step('"');
            ++i;
            out.push_back({body, sl, sc, true, false});
            continue;
        }
        const int sl = line, sc = col;
        std::string word;
        while (i < text.size() && is_word_char(text[i])) {
            word.push_back(text[i]);
            step(text[i]);
            ++i;
        }
        out.push_back({word, sl, sc, false, false});
    }
    out.push_back({"", line, col, false, true});
    return out;
}

// Identifier kinds tracked while parsing, so unknown references and type
// mismatches surface with source locations before any geometry runs.
enum class SceneKind { point, circle, chord, parabola, quad, incircle, ngon };

inline const char* scene_kind_name(SceneKind k) {
    switch (k) {
        case SceneKind::point: return "point";
        case SceneKind::circle: return "circle";
        case SceneKind::chord: return "chord";
        case SceneKind::parabola: return "parabola";
        case SceneKind::quad: return "quad";
        case SceneKind::incircle: return "incircle";
        case SceneKind::ngon: return "ngon";
    }
    return "value";
}

class SceneParser {
  public:
    explicit SceneParser(std::string_view text) : toks_(tokenize_scene(text)) {}

    SceneProgram parse() {
        SceneProgram prog;
        while (!peek().is_end) prog.statements.push_back(statement());
        return prog;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }

    Token next() { return toks_[pos_++]; }

    Token expect_punct(const char* p) {
        const Token t = next();
        if (t.is_end || t.is_string || t.text != p)
            fail_at(t.line, t.col, std::string("syntax error: expected '") + p + "'");
        return t;
    }

    Token expect_keyword(const char* kw) {
        const Token t = next();
        if (t.is_end || t.is_string || t.text != kw)
            fail_at(t.line, t.col, std::string("syntax error: expected '") + kw + "'");
        return t;
    }

    std::string expect_identifier() {
        const Token t = next();
        if (t.is_end || t.is_string || t.text.empty())
            fail_at(t.line, t.col, "syntax error: expected identifier");
        const char c0 = t.text[0];
        bool ok = std::isalpha(static_cast<unsigned char>(c0)) || c0 == '_';
        for (char c : t.text)
            ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
        if (!ok) fail_at(t.line, t.col, "syntax error: invalid identifier '" + t.text + "'");
        return t.text;
    }

    double expect_number() {
        const Token t = next();
        if (t.is_end || t.is_string) fail_at(t.line, t.col, "syntax error: expected number");
        char* end = nullptr;
        const double v = std::strtod(t.text.c_str(), &end);
        if (end != t.text.c_str() + t.text.size() || t.text.empty() || !std::isfinite(v))
            fail_at(t.line, t.col, "syntax error: expected number, got '" + t.text + "'");
        return v;
    }

    int expect_int() {
        const Token t = next();
        if (t.is_end || t.is_string) fail_at(t.line, t.col, "syntax error: expected integer");
        char* end = nullptr;
        const long v = std::strtol(t.text.c_str(), &end, 10);
        if (end != t.text.c_str() + t.text.size() || t.text.empty())
            fail_at(t.line, t.col, "syntax error: expected integer, got '" + t.text + "'");
        return static_cast<int>(v);
    }

    std::string expect_string() {
        const Token t = next();
        if (!t.is_string) fail_at(t.line, t.col, "syntax error: expected quoted string");
        return t.text;
    }

    void define(const std::string& id, SceneKind kind, int line, int col) {
        for (const auto& [name, k] : symbols_)
            if (name == id) fail_at(line, col, "duplicate identifier '" + id + "'");
        symbols_.emplace_back(id, kind);
    }

    std::string reference(SceneKind want) {
        const Token t = peek();
        const std::string id = expect_identifier();
        for (const auto& [name, k] : symbols_) {
            if (name != id) continue;
            if (k != want)
                fail_at(t.line, t.col,
                        "type mismatch: '" + id + "' is a " + scene_kind_name(k) +
                            ", expected " + scene_kind_name(want));
            return id;
        }
        fail_at(t.line, t.col, "unknown reference '" + id + "'");
    }

    Point point_literal() {
        expect_punct("(");
        const double x = expect_number();
        expect_punct(",");
        const double y = expect_number();
        expect_punct(")");
        return {x, y};
    }

    SceneStatement statement() {
        const Token head = next();
        if (head.is_string) fail_at(head.line, head.col, "syntax error: expected statement keyword");
        SceneStatement st;
        st.line = head.line;
        st.col = head.col;
        const std::string& kw = head.text;
        if (kw == "render") {
            st.kind = SceneStatement::Kind::render;
            st.path = expect_string();
            return st;
        }
        if (kw == "point") {
            st.kind = SceneStatement::Kind::point;
            st.id = expect_identifier();
            expect_punct("=");
            const Point p = point_literal();
            st.nums = {p.x, p.y, 0.0};
            define(st.id, SceneKind::point, st.line, st.col);
            return st;
        }
        if (kw == "circle") {
            st.kind = SceneStatement::Kind::circle;
            st.id = expect_identifier();
            expect_punct("=");
            expect_keyword("center");
            const Point c = point_literal();
            expect_keyword("radius");
            st.nums = {c.x, c.y, expect_number()};
            define(st.id, SceneKind::circle, st.line, st.col);
            return st;
        }
        if (kw == "chord") {
            st.kind = SceneStatement::Kind::chord;
            st.id = expect_identifier();
            expect_punct("=");
            st.refs.push_back(reference(SceneKind::circle));
            expect_keyword("at");
            st.nums[0] = expect_number();
            st.nums[1] = expect_number();
            define(st.id, SceneKind::chord, st.line, st.col);
            return st;
        }
        if (kw == "parabola") {
            st.id = expect_identifier();
            expect_punct("=");
            const Token mode = next();
            if (mode.text == "tangent") {
                st.kind = SceneStatement::Kind::parabola_tangent;
                st.refs.push_back(reference(SceneKind::circle));
                expect_keyword("at");
                st.refs.push_back(reference(SceneKind::chord));
            } else if (mode.text == "through") {
                st.kind = SceneStatement::Kind::parabola_through;
                for (int i = 0; i < 4; ++i) st.refs.push_back(reference(SceneKind::point));
                expect_keyword("pick");
                st.ival = expect_int();
                if (st.ival != 0 && st.ival != 1)
                    fail_at(mode.line, mode.col, "pick index must be 0 or 1");
            } else {
                fail_at(mode.line, mode.col, "syntax error: expected 'tangent' or 'through'");
            }
            define(st.id, SceneKind::parabola, st.line, st.col);
            return st;
        }
        if (kw == "quad") {
            st.kind = SceneStatement::Kind::quad;
            st.id = expect_identifier();
            expect_punct("=");
            st.refs.push_back(reference(SceneKind::parabola));
            expect_keyword("meet");
            st.refs.push_back(reference(SceneKind::parabola));
            define(st.id, SceneKind::quad, st.line, st.col);
            return st;
        }
        if (kw == "incircle") {
            st.kind = SceneStatement::Kind::incircle;
            st.id = expect_identifier();
            expect_punct("=");
            st.refs.push_back(reference(SceneKind::quad));
            define(st.id, SceneKind::incircle, st.line, st.col);
            return st;
        }
        if (kw == "ngon") {
            st.kind = SceneStatement::Kind::ngon;
            st.id = expect_identifier();
            expect_punct("=");
            st.refs.push_back(reference(SceneKind::circle));
            expect_keyword("around");
            const Point x = point_literal();
            expect_keyword("n");
            st.ival = expect_int();
            expect_keyword("phase");
            st.nums = {x.x, x.y, expect_number()};
            define(st.id, SceneKind::ngon, st.line, st.col);
            return st;
        }
        fail_at(head.line, head.col, "syntax error: unknown statement '" + kw + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::pair<std::string, SceneKind>> symbols_;
};

inline std::string num_repr(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline SceneProgram parse_scene(std::string_view text) {
    return detail::SceneParser(text).parse();
}

// Canonical text form; parsing it back yields an identical program.
inline std::string pretty_print(const SceneProgram& prog) {
    std::string out;
    const auto num = detail::num_repr;
    for (const SceneStatement& st : prog.statements) {
        using K = SceneStatement::Kind;
        switch (st.kind) {
            case K::point:
                out += "point " + st.id + " = (" + num(st.nums[0]) + ", " + num(st.nums[1]) + ")";
                break;
            case K::circle:
                out += "circle " + st.id + " = center (" + num(st.nums[0]) + ", " +
                       num(st.nums[1]) + ") radius " + num(st.nums[2]);
                break;
            case K::chord:
                out += "chord " + st.id + " = " + st.refs[0] + " at " + num(st.nums[0]) + " " +
                       num(st.nums[1]);
                break;
            case K::parabola_tangent:
                out += "parabola " + st.id + " = tangent " + st.refs[0] + " at " + st.refs[1];
                break;
            case K::parabola_through:
                out += "parabola " + st.id + " = through " + st.refs[0] + " " + st.refs[1] +
                       " " + st.refs[2] + " " + st.refs[3] + " pick " + std::to_string(st.ival);
                break;
            case K::quad:
                out += "quad " + st.id + " = " + st.refs[0] + " meet " + st.refs[1];
                break;
            case K::incircle:
                out += "incircle " + st.id + " = " + st.refs[0];
                break;
            case K::ngon:
                out += "ngon " + st.id + " = " + st.refs[0] + " around (" + num(st.nums[0]) +
                       ", " + num(st.nums[1]) + ") n " + std::to_string(st.ival) + " phase " +
                       num(st.nums[2]);
                break;
            case K::render:
                out += "render \"" + st.path + "\"";
                break;
        }
        out += "\n";
    }
    return out;
}

struct Chord {
    Circle circle;
    Point a, b;
};

using SceneValue = std::variant<Point, Circle, Chord, Conic, ParabolicQuadrilateral,
                                InscribedCircleResult, NGonResult>;

struct SceneBinding {
    std::string id;
    SceneValue value;
};

struct SceneEnvironment {
    std::vector<SceneBinding> bindings;  // insertion order, drives render order
    std::vector<std::string> render_paths;

    const SceneValue& at(const std::string& id) const {
        for (const SceneBinding& b : bindings)
            if (b.id == id) return b.value;
        fail("unbound identifier '" + id + "'");
    }
};

inline SceneEnvironment evaluate_scene(const SceneProgram& prog, const Tolerance& tol = {}) {
    tol.validate();
    SceneEnvironment env;
    for (const SceneStatement& st : prog.statements) {
        using K = SceneStatement::Kind;
        try {
            switch (st.kind) {
                case K::point:
                    env.bindings.push_back({st.id, Point{st.nums[0], st.nums[1]}});
                    break;
                case K::circle:
                    env.bindings.push_back(
                        {st.id, Circle::make({st.nums[0], st.nums[1]}, st.nums[2])});
                    break;
                case K::chord: {
                    const Circle k = std::get<Circle>(env.at(st.refs[0]));
                    env.bindings.push_back(
                        {st.id, Chord{k, k.at_angle(st.nums[0]), k.at_angle(st.nums[1])}});
                    break;
                }
                case K::parabola_tangent: {
                    const Circle k = std::get<Circle>(env.at(st.refs[0]));
                    const Chord c = std::get<Chord>(env.at(st.refs[1]));
                    env.bindings.push_back({st.id, parabola_from_tangent_chord(k, c.a, c.b, tol)});
                    break;
                }
                case K::parabola_through: {
                    std::array<Point, 4> ps;
                    for (int i = 0; i < 4; ++i)
                        ps[std::size_t(i)] = std::get<Point>(env.at(st.refs[std::size_t(i)]));
                    const FourPointParabolas fp =
                        parabolas_through_four_points(ps[0], ps[1], ps[2], ps[3], tol);
                    if (std::size_t(st.ival) >= fp.parabolas.size())
                        fail("pick index " + std::to_string(st.ival) + " out of range: " +
                             std::to_string(fp.parabolas.size()) + " real parabolas");
                    env.bindings.push_back({st.id, fp.parabolas[std::size_t(st.ival)]});
                    break;
                }
                case K::quad: {
                    const Conic p1 = std::get<Conic>(env.at(st.refs[0]));
                    const Conic p2 = std::get<Conic>(env.at(st.refs[1]));
                    env.bindings.push_back({st.id, parabolic_quadrilateral(p1, p2, tol)});
                    break;
                }
                case K::incircle: {
                    const auto& q = std::get<ParabolicQuadrilateral>(env.at(st.refs[0]));
                    env.bindings.push_back({st.id, inscribed_circle(q, tol)});
                    break;
                }
                case K::ngon: {
                    const Circle k = std::get<Circle>(env.at(st.refs[0]));
                    env.bindings.push_back(
                        {st.id, build_ngon(k, {st.nums[0], st.nums[1]}, st.ival, st.nums[2], tol)});
                    break;
                }
                case K::render:
                    env.render_paths.push_back(st.path);
                    break;
            }
        } catch (const Error& e) {
            detail::fail_at(st.line, st.col, e.what());
        }
    }
    return env;
}

}  // namespace pq
