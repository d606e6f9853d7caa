#pragma once

#include "dgmv/reduction.hpp"

namespace dgmv::moments {

/// Cumulant exponent of Y = a + bᵀZ + ZᵀΛZ:
///   η(θ) = aθ + Σ_j ½( θ²b_j²/(1−2θλ_j) − log(1−2θλ_j) ),
/// so E[exp(θY)] = exp(η(θ)). Defined while 1−2θλ_j > 0 for every j.
double mgf_exponent(double theta, const QuadraticReduction& qf);

/// E(Y) = a + Σ λ_j.
double mean(const QuadraticReduction& qf);

/// Var(Y) = Σ (b_j² + 2λ_j²).
double variance(const QuadraticReduction& qf);

/// E(Y²) = (a + Σλ_j)² + Σ(b_j² + 2λ_j²).
double second_moment(const QuadraticReduction& qf);

}  // namespace dgmv::moments
