#include "dgmv/instruments.hpp"

#include <cmath>
#include <string>

#include "dgmv/math.hpp"

namespace dgmv {

namespace {

struct BsTerms {
  double d1 = 0.0;
  double d2 = 0.0;
  double disc = 0.0;  // e^{-r tau}
  double sqrt_tau = 0.0;
};

BsTerms bs_terms(double spot, double strike, double vol, double rate, double tau) {
  BsTerms t;
  t.sqrt_tau = std::sqrt(tau);
  t.d1 = (std::log(spot / strike) + (rate + 0.5 * vol * vol) * tau) / (vol * t.sqrt_tau);
  t.d2 = t.d1 - vol * t.sqrt_tau;
  t.disc = std::exp(-rate * tau);
  return t;
}

// Continuity extension for non-positive spot so exact repricing never NaNs:
// the call is worthless, the put is the discounted strike minus spot.
double bs_value(double spot, double strike, double vol, double rate, double tau, bool call) {
  if (spot <= 0.0) return call ? 0.0 : strike * std::exp(-rate * tau) - spot;
  const BsTerms t = bs_terms(spot, strike, vol, rate, tau);
  if (call) return spot * norm_cdf(t.d1) - strike * t.disc * norm_cdf(t.d2);
  return strike * t.disc * norm_cdf(-t.d2) - spot * norm_cdf(-t.d1);
}

void check_option_params(const InstrumentDef& def) {
  if (!(def.strike > 0.0) || !(def.vol > 0.0) || !(def.expiry > 0.0) ||
      !std::isfinite(def.rate))
    throw ValidationError(Errc::BadOptionParams,
                          "options require strike > 0, vol > 0, expiry > 0, finite rate");
}

void check_factor_index(const InstrumentDef& def, Eigen::Index n) {
  if (def.factor_index < 0 || def.factor_index >= n)
    throw ValidationError(Errc::DimensionMismatch,
                          "factor index " + std::to_string(def.factor_index) +
                              " out of range for n = " + std::to_string(n));
}

GreekBundle option_greeks(const InstrumentDef& def, const FactorModel& model) {
  check_option_params(def);
  check_factor_index(def, model.n());
  const double spot = model.levels(def.factor_index);
  if (!(spot > 0.0))
    throw ValidationError(Errc::NegativeUnderlying,
                          "option underlying level must be positive, got " + std::to_string(spot));

  const bool call = def.kind == InstrumentKind::EuropeanCall;
  const BsTerms t = bs_terms(spot, def.strike, def.vol, def.rate, def.expiry);

  GreekBundle g;
  g.delta = Eigen::VectorXd::Zero(model.n());
  g.gamma = Eigen::MatrixXd::Zero(model.n(), model.n());

  const double time_decay = spot * norm_pdf(t.d1) * def.vol / (2.0 * t.sqrt_tau);
  if (call) {
    g.value = spot * norm_cdf(t.d1) - def.strike * t.disc * norm_cdf(t.d2);
    g.delta(def.factor_index) = norm_cdf(t.d1);
    g.theta = -time_decay - def.rate * def.strike * t.disc * norm_cdf(t.d2);
  } else {
    g.value = def.strike * t.disc * norm_cdf(-t.d2) - spot * norm_cdf(-t.d1);
    g.delta(def.factor_index) = norm_cdf(t.d1) - 1.0;
    g.theta = -time_decay + def.rate * def.strike * t.disc * norm_cdf(-t.d2);
  }
  g.gamma(def.factor_index, def.factor_index) =
      norm_pdf(t.d1) / (spot * def.vol * t.sqrt_tau);
  return g;
}

GreekBundle custom_greeks_checked(const InstrumentDef& def, Eigen::Index n) {
  if (!def.custom_greeks)
    throw ValidationError(Errc::BadOptionParams, "custom instrument is missing its greeks");
  GreekBundle g = *def.custom_greeks;
  if (g.delta.size() != n || g.gamma.rows() != n || g.gamma.cols() != n)
    throw ValidationError(Errc::DimensionMismatch, "custom greeks must be sized to n factors");
  const double scale = std::max(g.gamma.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (g.gamma - g.gamma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw ValidationError(Errc::AsymmetricCustomGamma,
                          "custom gamma asymmetry " + std::to_string(asym) + " exceeds tolerance");
  g.gamma = 0.5 * (g.gamma + g.gamma.transpose()).eval();
  return g;
}

}  // namespace

const char* instrument_kind_name(InstrumentKind kind) {
  switch (kind) {
    case InstrumentKind::Linear: return "linear";
    case InstrumentKind::Cash: return "cash";
    case InstrumentKind::EuropeanCall: return "european_call";
    case InstrumentKind::EuropeanPut: return "european_put";
    case InstrumentKind::Custom: return "custom";
  }
  return "unknown";
}

GreekBundle greeks(const InstrumentDef& def, const FactorModel& model) {
  const Eigen::Index n = model.n();
  switch (def.kind) {
    case InstrumentKind::Linear: {
      check_factor_index(def, n);
      GreekBundle g;
      g.value = model.levels(def.factor_index);
      g.delta = Eigen::VectorXd::Zero(n);
      g.delta(def.factor_index) = 1.0;
      g.gamma = Eigen::MatrixXd::Zero(n, n);
      return g;
    }
    case InstrumentKind::Cash: {
      // unit of account at zero interest
      GreekBundle g;
      g.value = 1.0;
      g.delta = Eigen::VectorXd::Zero(n);
      g.gamma = Eigen::MatrixXd::Zero(n, n);
      return g;
    }
    case InstrumentKind::EuropeanCall:
    case InstrumentKind::EuropeanPut:
      return option_greeks(def, model);
    case InstrumentKind::Custom:
      return custom_greeks_checked(def, n);
  }
  throw ValidationError(Errc::BadOptionParams, "unknown instrument kind");
}

double instrument_value(const InstrumentDef& def, const Eigen::VectorXd& levels, double tau) {
  switch (def.kind) {
    case InstrumentKind::Linear:
      check_factor_index(def, levels.size());
      return levels(def.factor_index);
    case InstrumentKind::Cash:
      return 1.0;
    case InstrumentKind::EuropeanCall:
    case InstrumentKind::EuropeanPut: {
      check_option_params(def);
      check_factor_index(def, levels.size());
      if (!(tau > 0.0))
        throw SolverError(Errc::ExpiryCrossed,
                          "cannot price option with non-positive time to expiry");
      return bs_value(levels(def.factor_index), def.strike, def.vol, def.rate, tau,
                      def.kind == InstrumentKind::EuropeanCall);
    }
    case InstrumentKind::Custom:
      throw SolverError(Errc::CustomNotRepriceable,
                        "custom instruments carry greeks only, no pricing function");
  }
  throw ValidationError(Errc::BadOptionParams, "unknown instrument kind");
}

PortfolioSpec make_portfolio(std::vector<InstrumentDef> instruments, Eigen::VectorXd positions,
                             const FactorModel& model) {
  if (instruments.empty())
    throw ValidationError(Errc::BadDimension, "portfolio needs at least one instrument");
  if (positions.size() != static_cast<Eigen::Index>(instruments.size()))
    throw ValidationError(Errc::DimensionMismatch,
                          "positions length " + std::to_string(positions.size()) +
                              " does not match instrument count " +
                              std::to_string(instruments.size()));
  PortfolioSpec spec;
  spec.instruments = std::move(instruments);
  spec.positions = std::move(positions);
  double book = 0.0;
  for (std::size_t k = 0; k < spec.instruments.size(); ++k)
    book += spec.positions(static_cast<Eigen::Index>(k)) *
            greeks(spec.instruments[k], model).value;
  spec.book_value = book;
  return spec;
}

}  // namespace dgmv
