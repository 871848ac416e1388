#include "newsflow/simulate.hpp"

#include "newsflow/stats.hpp"

#include <algorithm>
#include <random>

namespace newsflow::simulate {

std::vector<SimulatedObservation> simulate_scenario(const ScenarioConfig& config)
{
  const std::size_t n_sym = config.symbols.size();
  if (n_sym == 0)
    throw Error(Errc::missing_component, "symbols");
  if (config.residuals.empty())
    throw Error(Errc::missing_component, "regression residuals");
  if (!config.residual_copula)
    throw Error(Errc::missing_component, "residual copula");
  if (config.residual_copula->dimension() != n_sym + 1 || config.residual_marginals.size() != n_sym + 1)
    throw Error(Errc::dimension_mismatch, "residual copula must cover the market and every symbol");
  for (const auto& s : config.symbols)
    if (s.p > 0 && (!s.copula || s.marginals.size() != 2))
      throw Error(Errc::missing_component, "sentiment copula for " + s.symbol);
  if (config.n_days == 0)
    throw Error(Errc::invalid_value, "n_days must be positive");

  auto coef = [&](const char* name) {
    auto it = config.beta.find(name);
    return it == config.beta.end() ? 0.0 : it->second;
  };
  const double b_i = coef("I"), b_pos = coef("Pos"), b_neg = coef("Neg"), b_rm = coef("R_M"), b_vix = coef("VIX"),
               b_r = coef("R");

  // return draws for all symbols and the market share one copula sample
  Eigen::MatrixXd z = sample_copula(*config.residual_copula, config.residual_marginals, config.n_days,
                                    stats::derive_seed(config.seed, 0));

  std::vector<SimulatedObservation> out;
  out.reserve(n_sym * config.n_days);
  for (std::size_t s = 0; s < n_sym; ++s) {
    const auto& sym = config.symbols[s];
    std::mt19937_64 arrival(stats::derive_seed(config.seed, 3 * s + 1));
    std::mt19937_64 resid(stats::derive_seed(config.seed, 3 * s + 2));
    std::bernoulli_distribution coin(std::clamp(sym.p, 0.0, 1.0));
    std::uniform_int_distribution<std::size_t> pick(0, config.residuals.size() - 1);

    std::vector<bool> active(config.n_days);
    std::size_t n_active = 0;
    for (std::size_t t = 0; t < config.n_days; ++t) {
      active[t] = coin(arrival);
      n_active += active[t];
    }
    Eigen::MatrixXd sentiment;
    if (n_active > 0)
      sentiment = sample_copula(*sym.copula, sym.marginals, n_active, stats::derive_seed(config.seed, 3 * s + 3));

    std::size_t k = 0;
    for (std::size_t t = 0; t < config.n_days; ++t) {
      SimulatedObservation o;
      o.symbol = s;
      o.day = t;
      o.active = active[t];
      if (o.active) {
        o.pos = sentiment(static_cast<Eigen::Index>(k), 0);
        o.neg = sentiment(static_cast<Eigen::Index>(k), 1);
        ++k;
      }
      auto tt = static_cast<Eigen::Index>(t);
      o.market_return = z(tt, 0) * config.market_sigma_scale;
      o.ret = z(tt, static_cast<Eigen::Index>(s + 1)) * sym.sigma_scale;
      o.log_vol = config.alpha + b_i * (o.active ? 1.0 : 0.0) + b_pos * o.pos + b_neg * o.neg +
                  b_rm * o.market_return + b_vix * config.vix + b_r * o.ret + config.residuals[pick(resid)];
      out.push_back(o);
    }
  }
  return out;
}

AsymmetryCurves asymmetry_curves(std::span<const SimulatedObservation> obs, std::size_t grid_points, double level,
                                 std::size_t n_boot, std::uint64_t seed)
{
  std::vector<double> xp, xn, y;
  xp.reserve(obs.size());
  xn.reserve(obs.size());
  y.reserve(obs.size());
  for (const auto& o : obs) {
    xp.push_back(o.pos);
    xn.push_back(o.neg);
    y.push_back(o.log_vol);
  }
  if (obs.empty())
    throw Error(Errc::too_few_points, "no simulated observations");
  auto [pmin, pmax] = std::minmax_element(xp.begin(), xp.end());
  auto [nmin, nmax] = std::minmax_element(xn.begin(), xn.end());
  double lo = std::max(*pmin, *nmin), hi = std::min(*pmax, *nmax);
  if (!(hi > lo))
    throw Error(Errc::degenerate_x, "simulated Pos and Neg share no range");

  AsymmetryCurves out;
  out.grid = linear_grid(lo, hi, grid_points);
  out.pos = local_linear_fit(xp, y, plugin_bandwidth(xp, y), out.grid);
  out.neg = local_linear_fit(xn, y, plugin_bandwidth(xn, y), out.grid);
  out.pos = uniform_band(out.pos, xp, y, level, n_boot, stats::derive_seed(seed, 101));
  out.neg = uniform_band(out.neg, xn, y, level, n_boot, stats::derive_seed(seed, 102));
  out.separated = band_overlap_region(out.pos, out.neg);
  return out;
}

} // namespace newsflow::simulate
