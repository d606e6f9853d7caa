#include "dgmv/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#include "dgmv/rng.hpp"

namespace dgmv {

namespace {

// Fixed block size: the summation tree depends on the sample count alone,
// so the estimates cannot depend on scheduling or stream count.
constexpr std::int64_t kBlock = 8192;

int worker_count(const McConfig& cfg, std::int64_t blocks) {
  int workers = std::max(1, cfg.streams);
  if (const char* env = std::getenv("DGMV_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) workers = std::min(workers, cap);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw > 0) workers = std::min<int>(workers, static_cast<int>(hw));
  workers = std::min<std::int64_t>(workers, blocks);
  return std::max(1, workers);
}

template <std::size_t K>
using Acc = std::array<double, K>;

template <std::size_t K>
Acc<K> pairwise_combine(std::vector<Acc<K>> v) {
  if (v.empty()) return Acc<K>{};
  while (v.size() > 1) {
    std::vector<Acc<K>> next((v.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < v.size(); i += 2)
      for (std::size_t c = 0; c < K; ++c) next[i / 2][c] = v[i][c] + v[i + 1][c];
    if (v.size() % 2 == 1) next.back() = v.back();
    v = std::move(next);
  }
  return v.front();
}

// Runs `make_eval()` workers over the blocks; each block's partial sums land
// in a slot owned by the block, then a fixed pairwise tree combines them.
template <std::size_t K, class MakeEval>
Acc<K> blocked_sums(std::int64_t n, const McConfig& cfg, MakeEval&& make_eval) {
  if (n <= 0) return Acc<K>{};
  const std::int64_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Acc<K>> partial(static_cast<std::size_t>(blocks), Acc<K>{});
  const int workers = worker_count(cfg, blocks);

  std::atomic<std::int64_t> next{0};
  auto run = [&]() {
    auto eval = make_eval();
    for (;;) {
      const std::int64_t blk = next.fetch_add(1);
      if (blk >= blocks) break;
      Acc<K> acc{};
      const std::int64_t lo = blk * kBlock;
      const std::int64_t hi = std::min(n, lo + kBlock);
      for (std::int64_t i = lo; i < hi; ++i) eval(i, acc);
      partial[static_cast<std::size_t>(blk)] = acc;
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  return pairwise_combine(std::move(partial));
}

struct MomentEstimates {
  double mean = 0.0, var = 0.0, se_mean = 0.0, se_var = 0.0;
};

// Sums of powers of (value − shift) → mean/variance and their standard
// errors. The shift (the first sample) keeps the power sums conditioned.
MomentEstimates from_power_sums(const Acc<4>& s, std::int64_t n, double shift) {
  MomentEstimates est;
  const double nn = static_cast<double>(n);
  const double u1 = s[0] / nn;
  est.mean = shift + u1;
  if (n < 2) return est;
  const double m2 = std::max(0.0, s[1] / nn - u1 * u1);
  const double m4 =
      s[3] / nn - 4.0 * u1 * (s[2] / nn) + 6.0 * u1 * u1 * (s[1] / nn) - 3.0 * u1 * u1 * u1 * u1;
  est.var = m2 * nn / (nn - 1.0);
  est.se_mean = std::sqrt(est.var / nn);
  est.se_var = std::sqrt(std::max(0.0, (m4 - m2 * m2 * (nn - 3.0) / (nn - 1.0)) / nn));
  return est;
}

double eval_y(const QuadraticReduction& qf, rng::NormalStream& stream, std::int64_t sample) {
  const Eigen::Index n = qf.n();
  const std::uint64_t base = static_cast<std::uint64_t>(sample) * static_cast<std::uint64_t>(n);
  double y = qf.a;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double z = stream.at(base + static_cast<std::uint64_t>(j));
    y += (qf.b(j) + qf.lambda(j) * z) * z;
  }
  return y;
}

}  // namespace

QuadStats simulate_quadratic(const QuadraticReduction& qf, const McConfig& cfg) {
  if (cfg.samples < 1) throw ValidationError(Errc::BadDimension, "samples must be >= 1");
  rng::NormalStream probe(cfg.seed);
  const double shift = eval_y(qf, probe, 0);

  const Acc<4> sums = blocked_sums<4>(cfg.samples, cfg, [&]() {
    return [&qf, shift, stream = rng::NormalStream(cfg.seed)](std::int64_t i,
                                                              Acc<4>& acc) mutable {
      const double d = eval_y(qf, stream, i) - shift;
      const double d2 = d * d;
      acc[0] += d;
      acc[1] += d2;
      acc[2] += d2 * d;
      acc[3] += d2 * d2;
    };
  });

  const MomentEstimates est = from_power_sums(sums, cfg.samples, shift);
  return QuadStats{est.mean, est.var, est.se_mean, est.se_var};
}

MgfStats simulate_mgf(const QuadraticReduction& qf, double theta, const McConfig& cfg) {
  if (cfg.samples < 1) throw ValidationError(Errc::BadDimension, "samples must be >= 1");
  rng::NormalStream probe(cfg.seed);
  const double shift = std::exp(theta * eval_y(qf, probe, 0));

  const Acc<2> sums = blocked_sums<2>(cfg.samples, cfg, [&]() {
    return [&qf, theta, shift, stream = rng::NormalStream(cfg.seed)](std::int64_t i,
                                                                     Acc<2>& acc) mutable {
      const double d = std::exp(theta * eval_y(qf, stream, i)) - shift;
      acc[0] += d;
      acc[1] += d * d;
    };
  });

  const double nn = static_cast<double>(cfg.samples);
  const double u1 = sums[0] / nn;
  MgfStats out;
  out.est = shift + u1;
  if (cfg.samples > 1) {
    const double m2 = std::max(0.0, sums[1] / nn - u1 * u1);
    out.se = std::sqrt(m2 * nn / (nn - 1.0) / nn);
  }
  return out;
}

ExactStats simulate_exact(const PortfolioSpec& spec, const FactorModel& model,
                          const McConfig& cfg) {
  if (cfg.samples < 1) throw ValidationError(Errc::BadDimension, "samples must be >= 1");
  if (!model.validated) throw std::logic_error("FactorModel must pass validate_factor_model first");
  const Eigen::Index n = model.n();
  const Eigen::Index m = static_cast<Eigen::Index>(spec.instruments.size());
  if (spec.positions.size() != m)
    throw ValidationError(Errc::DimensionMismatch, "positions do not match instrument count");

  std::vector<GreekBundle> bundles;
  bundles.reserve(spec.instruments.size());
  for (const InstrumentDef& def : spec.instruments) {
    if (def.kind == InstrumentKind::Custom)
      throw SolverError(Errc::CustomNotRepriceable,
                        "exact repricing needs a pricing function for every instrument");
    if ((def.kind == InstrumentKind::EuropeanCall || def.kind == InstrumentKind::EuropeanPut) &&
        !(def.expiry > model.dt))
      throw SolverError(Errc::ExpiryCrossed, "horizon dt crosses an option expiry");
    bundles.push_back(greeks(def, model));
  }

  const AggregateGreeks agg = aggregate(bundles, spec.positions, model.dt);
  const Eigen::MatrixXd c_tilde = model.chol_eff();
  Eigen::VectorXd values0(m);
  for (Eigen::Index k = 0; k < m; ++k) values0(k) = bundles[static_cast<std::size_t>(k)].value;

  auto eval_dv = [&](rng::NormalStream& stream, Eigen::VectorXd& z, Eigen::VectorXd& ds,
                     Eigen::VectorXd& shifted, std::int64_t i, double& dv, double& dv_quad) {
    const std::uint64_t base = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n);
    for (Eigen::Index j = 0; j < n; ++j) z(j) = stream.at(base + static_cast<std::uint64_t>(j));
    ds.noalias() = c_tilde.triangularView<Eigen::Lower>() * z;
    shifted = model.levels + ds;

    dv = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const InstrumentDef& def = spec.instruments[static_cast<std::size_t>(k)];
      double v1 = 0.0;
      switch (def.kind) {
        case InstrumentKind::Linear:
          v1 = shifted(def.factor_index);
          break;
        case InstrumentKind::Cash:
          v1 = 1.0;
          break;
        default:
          v1 = instrument_value(def, shifted, def.expiry - model.dt);
          break;
      }
      dv += spec.positions(k) * (v1 - values0(k));
    }
    dv_quad = agg.a + agg.delta.dot(ds) + 0.5 * ds.dot(agg.gamma * ds);
  };

  // shift for the power sums: the first sample's exact P&L
  double shift = 0.0;
  {
    rng::NormalStream probe(cfg.seed);
    Eigen::VectorXd z(n), ds(n), shifted(n);
    double dv_quad = 0.0;
    eval_dv(probe, z, ds, shifted, 0, shift, dv_quad);
  }

  const Acc<5> sums = blocked_sums<5>(cfg.samples, cfg, [&]() {
    return [&, stream = rng::NormalStream(cfg.seed), z = Eigen::VectorXd(n),
            ds = Eigen::VectorXd(n), shifted = Eigen::VectorXd(n)](std::int64_t i,
                                                                   Acc<5>& acc) mutable {
      double dv = 0.0, dv_quad = 0.0;
      eval_dv(stream, z, ds, shifted, i, dv, dv_quad);
      const double d = dv - shift;
      const double d2 = d * d;
      acc[0] += d;
      acc[1] += d2;
      acc[2] += d2 * d;
      acc[3] += d2 * d2;
      acc[4] += std::abs(dv - dv_quad);
    };
  });

  const MomentEstimates est =
      from_power_sums({sums[0], sums[1], sums[2], sums[3]}, cfg.samples, shift);
  ExactStats out;
  out.mean_est = est.mean;
  out.var_est = est.var;
  out.se_mean = est.se_mean;
  out.se_var = est.se_var;
  out.approx_gap = sums[4] / static_cast<double>(cfg.samples);
  return out;
}

}  // namespace dgmv
