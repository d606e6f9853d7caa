#pragma once

#include <cstdint>

#include "dgmv/instruments.hpp"
#include "dgmv/reduction.hpp"

namespace dgmv {

/// Seeded Monte Carlo settings. Estimates are a pure function of
/// (seed, samples): `streams` only partitions the work, never the draws,
/// so changing it (or the thread count, or DGMV_THREADS) cannot change a
/// single output bit.
struct McConfig {
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  int streams = 1;
};

struct QuadStats {
  double mean_est = 0.0;
  double var_est = 0.0;
  double se_mean = 0.0;
  double se_var = 0.0;
};

/// Samples Y = a + bᵀZ + ZᵀΛZ and returns moment estimates with standard
/// errors. sample std / sqrt(N) for the mean; a fourth-moment based standard
/// error for the variance.
QuadStats simulate_quadratic(const QuadraticReduction& qf, const McConfig& cfg);

struct MgfStats {
  double est = 0.0;
  double se = 0.0;
};

/// Monte Carlo estimate of E[exp(theta·Y)] on the same deterministic draws.
MgfStats simulate_mgf(const QuadraticReduction& qf, double theta, const McConfig& cfg);

struct ExactStats {
  double mean_est = 0.0;
  double var_est = 0.0;
  double se_mean = 0.0;
  double se_var = 0.0;
  double approx_gap = 0.0;  ///< sample mean of |ΔV − δV|
};

/// Draws ΔS ~ N(0, Σ·dt), reprices every instrument at (S+ΔS, t+dt) exactly
/// and compares the true P&L with its delta-gamma approximation. Custom
/// instruments cannot be repriced; options must outlive the horizon.
ExactStats simulate_exact(const PortfolioSpec& spec, const FactorModel& model,
                          const McConfig& cfg);

}  // namespace dgmv
