#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "pq/error.hpp"
#include "pq/tolerance.hpp"

namespace pq {

struct RealRoot {
    double value = 0.0;
    int multiplicity = 1;
};

// Real roots of a degree <= 4 polynomial, ascending. Multiplicities come from
// clustering nearby roots, so a slightly perturbed double root reports as one
// root of multiplicity 2.
struct RootSet {
    std::vector<RealRoot> roots;
    int degree = 0;

    int total_multiplicity() const {
        int m = 0;
        for (const auto& r : roots) m += r.multiplicity;
        return m;
    }
};

namespace detail {

inline double poly_eval(std::span<const double> c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

inline std::vector<double> poly_derivative(std::span<const double> c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(double(i) * c[i]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

// Durand-Kerner iteration on a monic polynomial given by its non-leading
// coefficients c0..c_{n-1}. Converges for every degree we use (<= 4); multiple
// roots converge only linearly, which the later cluster + polish pass absorbs.
inline std::vector<std::complex<double>> durand_kerner(const std::vector<double>& monic) {
    const int n = int(monic.size());
    double radius = 0.0;
    for (double c : monic) radius = std::max(radius, std::abs(c));
    radius += 1.0;
    std::vector<std::complex<double>> z(n);
    const std::complex<double> g(0.4, 0.9);
    std::complex<double> p(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        p *= g;
        z[i] = radius * p;
    }
    auto eval = [&](std::complex<double> x) {
        std::complex<double> v(1.0, 0.0);
        for (int i = n - 1; i >= 0; --i) v = v * x + monic[i];
        return v;
    };
    for (int it = 0; it < 400; ++it) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> den(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            if (std::abs(den) < 1e-300) den = 1e-300;
            std::complex<double> step = eval(z[i]) / den;
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (worst < 1e-15) break;
    }
    return z;
}

inline double poly_magnitude(std::span<const double> c, double x) {
    double mag = 0.0, t = 1.0;
    for (double ck : c) {
        mag += std::abs(ck) * std::abs(t);
        t *= x;
    }
    return mag;
}

// Refine a multiplicity-m cluster mean. A multiple root of p is a simple,
// well-conditioned root of p^(m-1), so Newton there recovers full accuracy.
inline double polish_root(std::span<const double> coeffs, int mult, double x0,
                          const Tolerance& tol) {
    std::vector<double> p(coeffs.begin(), coeffs.end());
    for (int k = 1; k < mult; ++k) p = poly_derivative(p);
    std::vector<double> dp = poly_derivative(p);
    double x = x0;
    double best_res = std::abs(poly_eval(p, x));
    double best_x = x;
    for (int it = 0; it < 60; ++it) {
        double fp = poly_eval(dp, x);
        if (fp == 0.0) break;
        double nx = x - poly_eval(p, x) / fp;
        if (!std::isfinite(nx)) break;
        double r = std::abs(poly_eval(p, nx));
        if (r < best_res) {
            best_res = r;
            best_x = nx;
        }
        if (std::abs(nx - x) <= 1e-17 * (1.0 + std::abs(nx))) {
            x = nx;
            break;
        }
        x = nx;
    }
    // Reject polish steps that escape the cluster neighborhood.
    if (std::abs(best_x - x0) > 8.0 * tol.cluster_eps(x0)) return x0;
    return best_x;
}

inline std::vector<RealRoot> cluster_values(std::vector<double> vals, const Tolerance& tol) {
    std::sort(vals.begin(), vals.end());
    std::vector<RealRoot> out;
    std::size_t i = 0;
    while (i < vals.size()) {
        std::size_t j = i + 1;
        double sum = vals[i];
        while (j < vals.size()) {
            double mean = sum / double(j - i);
            if (vals[j] - mean <= tol.cluster_eps(mean))
                sum += vals[j++];
            else
                break;
        }
        out.push_back({sum / double(j - i), int(j - i)});
        i = j;
    }
    return out;
}

} // namespace detail

// Real roots with clustered multiplicities of a polynomial given by ascending
// coefficients c[0] + c[1] t + ... Degree at most 4 after dropping numerically
// vanishing leading coefficients.
inline RootSet solve_polynomial(std::span<const double> coeffs, const Tolerance& tol = {}) {
    tol.validate();
    if (coeffs.empty()) fail("indeterminate: zero polynomial");
    double maxc = 0.0;
    for (double c : coeffs) {
        if (!std::isfinite(c)) fail("indeterminate: non-finite coefficient");
        maxc = std::max(maxc, std::abs(c));
    }
    if (maxc == 0.0) fail("indeterminate: zero polynomial");

    std::vector<double> v(coeffs.begin(), coeffs.end());
    for (double& c : v) c /= maxc;
    int n = int(v.size()) - 1;
    while (n > 0 && std::abs(v[n]) <= 1e-13) --n;
    if (n > 4) fail("unsupported degree");
    v.resize(std::size_t(n) + 1);

    RootSet rs;
    rs.degree = n;
    if (n == 0) return rs;

    std::vector<double> reals;
    std::vector<RealRoot> rescued;
    std::vector<std::complex<double>> candidates;
    if (n == 1) {
        reals.push_back(-v[0] / v[1]);
    } else if (n == 2) {
        const double a = v[2], b = v[1], c = v[0];
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) {
            const double mid = -b / (2.0 * a);
            const double split = std::sqrt(-disc) / (2.0 * std::abs(a));
            if (split <= tol.cluster_eps(mid)) {
                reals.push_back(mid);
                reals.push_back(mid);
            }
        } else {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (b + std::copysign(sq, b));
            if (q == 0.0) {
                reals.push_back(0.0);
                reals.push_back(-b / a);
            } else {
                reals.push_back(q / a);
                reals.push_back(c / q);
            }
        }
    } else {
        std::vector<double> monic(v.begin(), v.end() - 1);
        for (double& c : monic) c /= v[std::size_t(n)];
        candidates = detail::durand_kerner(monic);

        // Multiple roots defeat both Durand-Kerner accuracy and the fixed
        // cluster radius once multiplicity exceeds 2. A multiplicity-m root of
        // p is a multiplicity-(m-1) root of p', located there with full
        // accuracy, so recurse on the derivative and claim any of its roots at
        // which p itself vanishes.
        RootSet deriv = solve_polynomial(detail::poly_derivative(v), tol);
        std::sort(deriv.roots.begin(), deriv.roots.end(),
                  [](const RealRoot& a, const RealRoot& b) {
                      return a.multiplicity > b.multiplicity;
                  });
        std::vector<char> taken(candidates.size(), 0);
        for (const auto& d : deriv.roots) {
            const int m = d.multiplicity + 1;
            const double mag = detail::poly_magnitude(v, d.value);
            if (std::abs(detail::poly_eval(v, d.value)) >
                tol.eps_construct * std::max(1.0, mag))
                continue;
            rescued.push_back({d.value, m});
            // Retire the satellite candidates this multiple root produced.
            const double radius =
                50.0 * std::pow(2.3e-16, 1.0 / m) * (1.0 + std::abs(d.value));
            for (int k = 0; k < m; ++k) {
                int best = -1;
                double bd = radius;
                for (std::size_t i = 0; i < candidates.size(); ++i) {
                    if (taken[i]) continue;
                    double dist = std::abs(candidates[i] - std::complex<double>(d.value, 0.0));
                    if (dist <= bd) {
                        bd = dist;
                        best = int(i);
                    }
                }
                if (best < 0) break;
                taken[std::size_t(best)] = 1;
            }
        }
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (!taken[i] && std::abs(candidates[i].imag()) <=
                                 tol.cluster_eps(std::abs(candidates[i])))
                reals.push_back(candidates[i].real());
    }

    auto clusters = detail::cluster_values(std::move(reals), tol);
    std::vector<double> polished;
    std::vector<int> mult;
    for (const auto& r : rescued) {
        polished.push_back(r.value);
        mult.push_back(r.multiplicity);
    }
    for (const auto& cl : clusters) {
        polished.push_back(detail::polish_root(v, cl.multiplicity, cl.value, tol));
        mult.push_back(cl.multiplicity);
    }
    // Polishing can pull two clusters together; merge once more.
    for (std::size_t i = 0; i < polished.size(); ++i) {
        bool merged = false;
        for (auto& r : rs.roots) {
            if (std::abs(polished[i] - r.value) <= tol.cluster_eps(r.value)) {
                r.value = (r.value * r.multiplicity + polished[i] * mult[i]) /
                          double(r.multiplicity + mult[i]);
                r.multiplicity += mult[i];
                merged = true;
                break;
            }
        }
        if (!merged) rs.roots.push_back({polished[i], mult[i]});
    }
    for (int guard = 0; rs.total_multiplicity() > n && guard < 8; ++guard) {
        auto worst = std::max_element(rs.roots.begin(), rs.roots.end(),
                                      [](const RealRoot& a, const RealRoot& b) {
                                          return a.multiplicity < b.multiplicity;
                                      });
        worst->multiplicity -= 1;
    }
    std::sort(rs.roots.begin(), rs.roots.end(),
              [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
    return rs;
}

// Perfect-square certificate for a quartic with positive leading coefficient.
// Returns the quadratic q (ascending coefficients) whose square reproduces the
// three highest coefficients exactly, plus the worst relative mismatch on the
// two remaining ones. Residual ~0 certifies the quartic as q(t)^2.
inline std::pair<std::array<double, 3>, double>
square_decompose_quartic(const std::array<double, 5>& coeffs, const Tolerance& tol = {}) {
    tol.validate();
    if (!(coeffs[4] > 0.0)) fail("not a positive quartic");
    double maxc = 0.0;
    for (double c : coeffs) {
        if (!std::isfinite(c)) fail("not a positive quartic: non-finite coefficient");
        maxc = std::max(maxc, std::abs(c));
    }
    const double a0 = coeffs[0] / maxc, a1 = coeffs[1] / maxc, a2 = coeffs[2] / maxc,
                 a3 = coeffs[3] / maxc, a4 = coeffs[4] / maxc;
    const double b2 = std::sqrt(a4);
    const double b1 = a3 / (2.0 * b2);
    const double b0 = (a2 - b1 * b1) / (2.0 * b2);
    const double residual = std::max(std::abs(2.0 * b1 * b0 - a1), std::abs(b0 * b0 - a0));
    const double s = std::sqrt(maxc);
    return {{b0 * s, b1 * s, b2 * s}, residual};
}

} // namespace pq
