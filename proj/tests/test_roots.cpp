#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "pq/rng.hpp"
#include "pq/roots.hpp"

using namespace pq;
using Catch::Matchers::ContainsSubstring;

namespace {

RootSet solve(std::vector<double> c, Tolerance tol = {}) {
    return solve_polynomial(c, tol);
}

void expect_roots(const RootSet& rs, const std::vector<std::pair<double, int>>& want,
                  double eps = 1e-12) {
    REQUIRE(rs.roots.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(std::abs(rs.roots[i].value - want[i].first) <=
              eps * std::max(1.0, std::abs(want[i].first)));
        CHECK(rs.roots[i].multiplicity == want[i].second);
    }
}

} // namespace

TEST_CASE("quartic with four simple roots") {
    // t^4 - 2.5 t^2 + t + 0.3125 = (t^2 + t - 5/4)(t^2 - t - 1/4)
    auto rs = solve({0.3125, 1.0, -2.5, 0.0, 1.0});
    const double s6 = std::sqrt(6.0), s2 = std::sqrt(2.0);
    expect_roots(rs, {{(-1.0 - s6) / 2.0, 1},
                      {(1.0 - s2) / 2.0, 1},
                      {(-1.0 + s6) / 2.0, 1},
                      {(1.0 + s2) / 2.0, 1}});
    CHECK(rs.degree == 4);
}

TEST_CASE("quartic with two double roots") {
    auto rs = solve({1.0, 0.0, -2.0, 0.0, 1.0}); // (t^2 - 1)^2
    expect_roots(rs, {{-1.0, 2}, {1.0, 2}});
    CHECK(rs.total_multiplicity() == 4);
}

TEST_CASE("quartic with no real roots") {
    auto rs = solve({1.0, 0.0, 0.0, 0.0, 1.0}); // t^4 + 1
    CHECK(rs.roots.empty());
    CHECK(rs.degree == 4);
}

TEST_CASE("cubic") {
    auto rs = solve({-6.0, 11.0, -6.0, 1.0}); // (t-1)(t-2)(t-3)
    expect_roots(rs, {{1.0, 1}, {2.0, 1}, {3.0, 1}});
}

TEST_CASE("quadratic, linear, constant") {
    expect_roots(solve({-8.0, 0.0, 2.0}), {{-2.0, 1}, {2.0, 1}});
    expect_roots(solve({3.0, -1.5}), {{2.0, 1}});
    auto rs = solve({7.0});
    CHECK(rs.degree == 0);
    CHECK(rs.roots.empty());
}

TEST_CASE("triple root") {
    auto rs = solve({-1.0, 3.0, -3.0, 1.0}); // (t-1)^3
    expect_roots(rs, {{1.0, 3}}, 1e-9);
}

TEST_CASE("quadruple root") {
    // (t - 0.5)^4
    auto rs = solve({0.0625, -0.5, 1.5, -2.0, 1.0});
    expect_roots(rs, {{0.5, 4}}, 1e-9);
}

TEST_CASE("coefficient scaling does not change roots") {
    std::vector<double> base{0.3125, 1.0, -2.5, 0.0, 1.0};
    auto ref = solve(base);
    for (double s : {1e12, 1e-12, 7.5}) {
        std::vector<double> scaled;
        for (double c : base) scaled.push_back(c * s);
        auto rs = solve(scaled);
        REQUIRE(rs.roots.size() == ref.roots.size());
        for (std::size_t i = 0; i < ref.roots.size(); ++i)
            CHECK(std::abs(rs.roots[i].value - ref.roots[i].value) <= 1e-12);
    }
}

TEST_CASE("numerically vanishing leading coefficients are trimmed") {
    auto rs = solve({-1.0, 0.0, 1.0, 1e-320, 0.0}); // effectively t^2 - 1
    CHECK(rs.degree == 2);
    expect_roots(rs, {{-1.0, 1}, {1.0, 1}});
}

TEST_CASE("error cases") {
    CHECK_THROWS_WITH(solve({}), ContainsSubstring("indeterminate"));
    CHECK_THROWS_WITH(solve({0.0, 0.0, 0.0}), ContainsSubstring("indeterminate"));
    CHECK_THROWS_WITH(solve({1.0, 1.0, 1.0, 1.0, 1.0, 1.0}),
                      ContainsSubstring("unsupported degree"));
    Tolerance bad;
    bad.eps_construct = 1e-3; // larger than eps_iterative
    bad.eps_iterative = 1e-7;
    CHECK_THROWS_WITH(solve({1.0, 1.0}, bad), ContainsSubstring("invalid tolerance"));
}

TEST_CASE("seeded factored quartics recover constructed roots") {
    Tolerance tol;
    int double_cases = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Rng rng = Rng::substream(20260814, std::uint64_t(trial));
        // Draw distinct well-separated roots, optionally duplicating one to
        // force an exact double root, or replacing a pair by a complex factor.
        std::array<double, 4> r{};
        bool ok = false;
        while (!ok) {
            for (auto& x : r) x = rng.uniform(-3.0, 3.0);
            ok = true;
            for (int i = 0; i < 4 && ok; ++i)
                for (int j = i + 1; j < 4; ++j)
                    if (std::abs(r[i] - r[j]) < 0.05) { ok = false; break; }
        }
        const int kind = trial % 3;
        std::vector<std::pair<double, int>> want;
        std::vector<double> p{1.0};
        auto mul_linear = [&](double root) {
            std::vector<double> q(p.size() + 1, 0.0);
            for (std::size_t i = 0; i < p.size(); ++i) {
                q[i + 1] += p[i];
                q[i] -= root * p[i];
            }
            p = q;
        };
        if (kind == 0) {
            for (double x : r) mul_linear(x);
            for (double x : r) want.push_back({x, 1});
        } else if (kind == 1) {
            mul_linear(r[0]);
            mul_linear(r[0]);
            mul_linear(r[1]);
            mul_linear(r[2]);
            want = {{r[0], 2}, {r[1], 1}, {r[2], 1}};
            ++double_cases;
        } else {
            // (t^2 + bt + c) irreducible: disc <= -0.5
            double b = rng.uniform(-2.0, 2.0);
            double c = (b * b + rng.uniform(0.5, 2.0)) / 4.0;
            std::vector<double> q(p.size() + 2, 0.0);
            for (std::size_t i = 0; i < p.size(); ++i) {
                q[i] += c * p[i];
                q[i + 1] += b * p[i];
                q[i + 2] += p[i];
            }
            p = q;
            mul_linear(r[0]);
            mul_linear(r[1]);
            want = {{r[0], 1}, {r[1], 1}};
        }
        std::sort(want.begin(), want.end());
        auto rs = solve_polynomial(p, tol);
        REQUIRE(rs.roots.size() == want.size());
        double scale = 0.0;
        for (double c : p) scale = std::max(scale, std::abs(c));
        for (std::size_t i = 0; i < want.size(); ++i) {
            CHECK(rs.roots[i].multiplicity == want[i].second);
            CHECK(std::abs(rs.roots[i].value - want[i].first) <=
                  tol.eps_construct * std::max(1.0, std::abs(want[i].first)));
        }
        // Residual contract on the original coefficients.
        for (const auto& root : rs.roots) {
            double mag = 0.0, t = 1.0;
            for (double c : p) {
                mag += std::abs(c) * std::abs(t);
                t *= root.value;
            }
            CHECK(std::abs(detail::poly_eval(p, root.value)) <=
                  tol.eps_construct * std::max(mag, scale));
        }
    }
    CHECK(double_cases > 300);
}

TEST_CASE("square decomposition certificates") {
    Tolerance tol;
    SECTION("exact square") {
        // (t^2 + t - 5/4)^2
        std::array<double, 5> c{25.0 / 16.0, -2.5, -1.5, 2.0, 1.0};
        auto [q, res] = square_decompose_quartic(c, tol);
        CHECK(res <= 1e-14);
        CHECK(std::abs(q[2] - 1.0) <= 1e-14);
        CHECK(std::abs(q[1] - 1.0) <= 1e-14);
        CHECK(std::abs(q[0] + 1.25) <= 1e-14);
    }
    SECTION("biased quartic is far from a square") {
        std::array<double, 5> c{1.0, 0.0, 0.0, 0.0, 1.0}; // t^4 + 1
        auto [q, res] = square_decompose_quartic(c, tol);
        CHECK(std::abs(res - 1.0) <= 1e-14);
        CHECK(std::abs(q[0]) <= 1e-14);
        CHECK(std::abs(q[1]) <= 1e-14);
    }
    SECTION("even square") {
        std::array<double, 5> c{0.5625, 0.0, -1.5, 0.0, 1.0}; // (t^2 - 3/4)^2
        auto [q, res] = square_decompose_quartic(c, tol);
        CHECK(res <= 1e-14);
        CHECK(std::abs(q[0] + 0.75) <= 1e-14);
        CHECK(std::abs(q[1]) <= 1e-14);
        CHECK(std::abs(q[2] - 1.0) <= 1e-14);
    }
    SECTION("random squares decompose with tiny residual") {
        for (int trial = 0; trial < 200; ++trial) {
            Rng rng = Rng::substream(77, std::uint64_t(trial));
            double b2 = rng.uniform(0.2, 3.0);
            double b1 = rng.uniform(-2.0, 2.0);
            double b0 = rng.uniform(-2.0, 2.0);
            std::array<double, 5> c{b0 * b0, 2.0 * b0 * b1, b1 * b1 + 2.0 * b0 * b2,
                                    2.0 * b1 * b2, b2 * b2};
            auto [q, res] = square_decompose_quartic(c, tol);
            CHECK(res <= 1e-13);
            CHECK(std::abs(q[2] - b2) <= 1e-12 * std::max(1.0, b2));
        }
    }
    SECTION("negative leading coefficient is rejected") {
        CHECK_THROWS_WITH(square_decompose_quartic({1.0, 0.0, 0.0, 0.0, -1.0}),
                          ContainsSubstring("not a positive quartic"));
    }
}
