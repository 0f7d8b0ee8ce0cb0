#pragma once
#include <algorithm>
#include <cmath>

#include "pq/error.hpp"

namespace pq {

// Tolerance policy shared by every routine. eps_construct bounds residuals of
// closed-form constructions, eps_iterative bounds iteratively obtained
// quantities, cluster_scale is the exponent applied to eps_construct when
// deciding whether two polynomial roots collapse into one multiple root.
struct Tolerance {
    double eps_construct = 1e-9;
    double eps_iterative = 1e-7;
    double cluster_scale = 0.5;

    void validate() const {
        if (!(eps_construct > 0.0) || !(eps_iterative > 0.0) || !(cluster_scale > 0.0))
            fail("invalid tolerance: fields must be positive");
        if (eps_construct > eps_iterative)
            fail("invalid tolerance: eps_construct must not exceed eps_iterative");
    }

    // Distance below which two roots of magnitude mag form one cluster.
    double cluster_eps(double mag = 1.0) const {
        return std::pow(eps_construct, cluster_scale) * std::max(1.0, std::abs(mag));
    }
};

} // namespace pq
