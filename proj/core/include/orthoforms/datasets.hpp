#pragma once

#include <vector>

#include "orthoforms/arith.hpp"
#include "orthoforms/borcherds_weyl.hpp"

namespace orthoforms {

/// Coefficients c(-1), c(0), ..., c(n_max) of E4^2/Delta = q^-1 + 504 + ...
std::vector<Integer> e4_squared_over_delta(long n_max);

/// The weight-0 index-1 weak Jacobi form for E8, f(n,l) = c(n - (l,l)/2).
/// Coefficients with n - (l,l)/2 > n_max raise a missing-data error.
JacobiCoefficients e8_weak_jacobi(long n_max);

/// q^0 layer of the same form: the 240 roots with f = 1 and f(0,0) = 504.
QZeroData e8_q0_layer();

}  // namespace orthoforms
