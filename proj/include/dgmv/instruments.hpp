#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "dgmv/market.hpp"

namespace dgmv {

enum class InstrumentKind { Linear, Cash, EuropeanCall, EuropeanPut, Custom };

const char* instrument_kind_name(InstrumentKind kind);

/// One instrument's value and sensitivities to the factor vector:
/// value V, theta = ∂V/∂t, delta_i = ∂V/∂S_i, gamma_ij = ∂²V/∂S_i∂S_j.
struct GreekBundle {
  double value = 0.0;
  double theta = 0.0;
  Eigen::VectorXd delta;
  Eigen::MatrixXd gamma;

  Eigen::Index n() const { return delta.size(); }
};

struct InstrumentDef {
  InstrumentKind kind = InstrumentKind::Cash;
  int factor_index = 0;  // Linear and options
  double strike = 0.0;   // options
  double vol = 0.0;      // options, per sqrt(time)
  double rate = 0.0;     // options, continuously compounded
  double expiry = 0.0;   // options, time to maturity
  std::optional<GreekBundle> custom_greeks;
};

/// Value, theta, delta, gamma of one instrument at the model's levels.
/// Options use the Black-Scholes closed forms on their single underlying
/// factor; Custom echoes its supplied bundle after symmetry validation.
GreekBundle greeks(const InstrumentDef& def, const FactorModel& model);

/// Price the instrument at arbitrary factor levels with tau to expiry
/// (options). Used for exact repricing; Custom instruments have no pricing
/// function and are rejected.
double instrument_value(const InstrumentDef& def, const Eigen::VectorXd& levels, double tau);

/// A book: instrument definitions, share counts, and the book value
/// V(S,t) = Σ x_k V_k.
struct PortfolioSpec {
  std::vector<InstrumentDef> instruments;
  Eigen::VectorXd positions;
  double book_value = 0.0;
};

/// Builds the book and its value from the model; validates dimensions.
PortfolioSpec make_portfolio(std::vector<InstrumentDef> instruments, Eigen::VectorXd positions,
                             const FactorModel& model);

inline Eigen::VectorXd weights_from_shares(const PortfolioSpec& spec) {
  return weights_from_shares(spec.positions, spec.book_value);
}

}  // namespace dgmv
