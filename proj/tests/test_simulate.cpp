#include "newsflow/simulate.hpp"
#include "newsflow/stats.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>

using namespace newsflow;
using namespace newsflow::simulate;
using testutil::error_of;

namespace {

double normal_scores_corr(const Eigen::MatrixXd& m, int a, int b)
{
  std::vector<double> x(static_cast<std::size_t>(m.rows())), y(x.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    x[static_cast<std::size_t>(i)] = m(i, a);
    y[static_cast<std::size_t>(i)] = m(i, b);
  }
  EmpiricalDistribution ex(x), ey(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = stats::normal_quantile(ex.cdf(x[i]));
    y[i] = stats::normal_quantile(ey.cdf(y[i]));
  }
  return stats::pearson(x, y);
}

SmootherFit flat_fit(const std::vector<double>& grid, double centre, double half)
{
  SmootherFit f;
  f.grid = grid;
  f.curve.assign(grid.size(), centre);
  f.lower.assign(grid.size(), centre - half);
  f.upper.assign(grid.size(), centre + half);
  return f;
}

} // namespace

TEST_CASE("empirical distribution")
{
  EmpiricalDistribution e({3.0, 1.0, 2.0, 4.0});
  CHECK(e.cdf(0.0) == doctest::Approx(0.2));
  CHECK(e.cdf(2.0) == doctest::Approx(0.4));
  CHECK(e.quantile(0.4) == 2.0);
  CHECK(e.quantile(0.0) == 1.0);
  CHECK(e.quantile(1.0) == 4.0);
  CHECK(error_of([] { EmpiricalDistribution({1.0}); }) == Errc::too_few_points);
}

TEST_CASE("copula fit and sampling")
{
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  const Eigen::Index n = 10000;
  Eigen::MatrixXd ind(n, 2), mono(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    ind(i, 0) = z(rng);
    ind(i, 1) = z(rng);
    mono(i, 0) = z(rng);
    mono(i, 1) = std::exp(mono(i, 0));
  }
  CHECK(std::abs(fit_gaussian_copula(ind).correlation(0, 1)) < 0.05);
  CHECK(fit_gaussian_copula(mono).correlation(0, 1) > 0.99);
  CHECK(fit_gaussian_copula(ind.leftCols(1)).correlation == Eigen::MatrixXd::Ones(1, 1));

  GaussianCopula target;
  target.correlation = Eigen::Matrix2d{{1.0, 0.8}, {0.8, 1.0}};
  std::vector<double> base;
  for (int i = 0; i < 500; ++i)
    base.push_back(5.0 + 1e-6 * z(rng));
  std::vector<EmpiricalDistribution> marg{EmpiricalDistribution(base), EmpiricalDistribution(base)};
  auto s = sample_copula(target, marg, 10000, 17);
  CHECK(std::abs(normal_scores_corr(s, 0, 1) - 0.8) < 0.05);
  auto [lo, hi] = std::minmax_element(base.begin(), base.end());
  CHECK(s.minCoeff() >= *lo);
  CHECK(s.maxCoeff() <= *hi);

  GaussianCopula identity;
  identity.correlation = Eigen::Matrix2d::Identity();
  CHECK(std::abs(normal_scores_corr(sample_copula(identity, marg, 10000, 3), 0, 1)) < 0.05);
  CHECK(sample_copula(identity, marg, 50, 3) == sample_copula(identity, marg, 50, 3));

  GaussianCopula bad;
  bad.correlation = Eigen::Matrix2d{{1.0, 1.5}, {1.5, 1.0}};
  CHECK(error_of([&] { sample_copula(bad, marg, 10, 1); }) == Errc::non_psd_matrix);
}

TEST_CASE("GARCH filter, standardization and degenerate input")
{
  std::vector<double> r{0.1, -0.2, 0.3, 0.0, 0.5, -0.1};
  GarchParams plain{0.05, 0.0, 0.04, 0.0, 0.0};
  auto z = standardize_residuals(r, plain);
  for (std::size_t t = 0; t < r.size(); ++t)
    CHECK(std::abs(z.z[t] - (r[t] - 0.05) / 0.2) < 1e-15);

  std::vector<double> flat(400, 0.01);
  CHECK(error_of([&] { fit_ma1_garch11(flat); }) == Errc::non_convergence);
  CHECK(error_of([&] { fit_ma1_garch11(std::vector<double>(100, 0.0)); }) == Errc::too_few_points);
}

TEST_CASE("GARCH on i.i.d. data stays near the constant-variance model")
{
  std::mt19937_64 rng(21);
  std::normal_distribution<double> z;
  std::vector<double> r(5000);
  for (auto& v : r)
    v = z(rng);
  GarchFit fit;
  try {
    fit = fit_ma1_garch11(r);
  } catch (const Error& e) {
    // near-unit persistence with negligible alpha is also a degenerate answer
    CHECK(e.code() == Errc::non_stationary_solution);
    return;
  }
  CHECK(fit.params.alpha < 0.05);
  double var = stats::sample_sd(r) * stats::sample_sd(r);
  GarchParams truth{stats::mean(r), 0.0, var, 0.0, 0.0};
  CHECK(fit.log_likelihood >= garch_log_likelihood(r, truth) - 1e-6);
}

TEST_CASE("standardized residuals have unit variance on simulated data")
{
  GarchParams p{0.0, 0.1, 0.05, 0.1, 0.8};
  auto r = simulate_ma1_garch11(p, 20000, 77);
  auto z = standardize_residuals(r, p);
  double sd = stats::sample_sd(z.z);
  CHECK(std::abs(sd * sd - 1.0) < 0.05);
}

TEST_CASE("local-linear smoother")
{
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(200), y(200);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = u(rng);
    y[i] = 2.0 - 3.0 * x[i];
  }
  auto grid = linear_grid(0.0, 1.0, 21);
  for (double h : {0.02, 0.2, 5.0}) {
    auto f = local_linear_fit(x, y, h, grid);
    for (std::size_t g = 0; g < grid.size(); ++g)
      CHECK(std::abs(f.curve[g] - (2.0 - 3.0 * grid[g])) < 1e-10);
  }
  auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  CHECK(plugin_bandwidth(x, y) == doctest::Approx(*xmax - *xmin));
  std::normal_distribution<double> noise;
  std::vector<double> noisy(y);
  for (auto& v : noisy)
    v += 0.1 * noise(rng);
  MESSAGE("noisy line bandwidth " << plugin_bandwidth(x, noisy));
  CHECK(plugin_bandwidth(x, noisy) > 0.1);

  auto band = uniform_band(local_linear_fit(x, y, 0.1, grid), x, y, 0.95, 200, 4);
  for (std::size_t g = 0; g < grid.size(); ++g)
    CHECK(band.upper[g] - band.lower[g] < 1e-8);
  CHECK(error_of([&] { uniform_band(local_linear_fit(x, y, 0.1, grid), x, y, 0.95, 50, 4); }) ==
        Errc::too_few_bootstraps);

  // large h tends to the global least-squares line
  std::normal_distribution<double> z;
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = std::sin(6 * x[i]) + 0.1 * z(rng);
  Eigen::MatrixXd Z(200, 2);
  Eigen::VectorXd Y(200);
  for (Eigen::Index i = 0; i < 200; ++i) {
    Z(i, 0) = 1.0;
    Z(i, 1) = x[static_cast<std::size_t>(i)];
    Y(i) = y[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd c = Z.colPivHouseholderQr().solve(Y);
  auto wide = local_linear_fit(x, y, 1e4, grid);
  for (std::size_t g = 0; g < grid.size(); ++g)
    CHECK(std::abs(wide.curve[g] - (c(0) + c(1) * grid[g])) < 1e-5);

  // agrees with the textbook weighted least squares at a single point
  auto one = local_linear_fit(x, y, 0.07, grid);
  CHECK(std::abs(one.curve[7] - oracle::local_linear_at(x, y, 0.07, grid[7])) < 1e-10);

  CHECK(error_of([&] { plugin_bandwidth(std::vector<double>(30, 1.0), std::vector<double>(30, 1.0)); }) ==
        Errc::degenerate_x);
}

TEST_CASE("plug-in bandwidth against cross-validation")
{
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z;
  std::vector<double> x(500), y(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = u(rng);
    y[i] = std::sin(2 * M_PI * x[i]) + 0.3 * z(rng);
  }
  double h = plugin_bandwidth(x, y);
  double cv = oracle::cv_bandwidth(x, y, 0.01, 0.3, 40);
  MESSAGE("plug-in " << h << " cross-validated " << cv);
  CHECK(h > cv / 2);
  CHECK(h < cv * 2);

  std::vector<double> x2(2000), y2(2000);
  for (std::size_t i = 0; i < x2.size(); ++i) {
    x2[i] = u(rng);
    y2[i] = std::sin(2 * M_PI * x2[i]) + 0.1 * z(rng);
  }
  auto grid = linear_grid(0.0, 1.0, 101);
  auto f = local_linear_fit(x2, y2, oracle::cv_bandwidth(std::span(x2).first(400), std::span(y2).first(400), 0.01, 0.3, 25), grid);
  double worst = 0;
  for (std::size_t g = 0; g < grid.size(); ++g)
    worst = std::max(worst, std::abs(f.curve[g] - std::sin(2 * M_PI * grid[g])));
  CHECK(worst < 0.1);
}

TEST_CASE("band overlap regions")
{
  auto grid = linear_grid(0.0, 0.1, 101);
  auto same = flat_fit(grid, 1.0, 0.1);
  CHECK(band_overlap_region(same, same).empty());

  auto all = band_overlap_region(flat_fit(grid, 1.0, 0.1), flat_fit(grid, 2.0, 0.1));
  REQUIRE(all.size() == 1);
  CHECK(all[0].lo == grid.front());
  CHECK(all[0].hi == grid.back());
  CHECK(all[0].neg_above);

  auto neg = flat_fit(grid, 1.0, 0.1);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (grid[g] >= 0.02 - 1e-12 && grid[g] <= 0.05 + 1e-12) {
      neg.lower[g] = 1.5;
      neg.upper[g] = 1.7;
    }
  }
  auto part = band_overlap_region(flat_fit(grid, 1.0, 0.1), neg);
  REQUIRE(part.size() == 1);
  CHECK(std::abs(part[0].lo - 0.02) <= 0.001 + 1e-12);
  CHECK(std::abs(part[0].hi - 0.05) <= 0.001 + 1e-12);

  auto other = flat_fit(linear_grid(0.0, 0.2, 101), 1.0, 0.1);
  CHECK(error_of([&] { band_overlap_region(same, other); }) == Errc::grid_mismatch);
}

TEST_CASE("scenario simulation")
{
  ScenarioConfig cfg;
  cfg.alpha = 0.0;
  cfg.residuals = {0.0, 0.0};
  cfg.n_days = 200;
  cfg.seed = 5;
  std::vector<double> pm{0.03, 0.03}, nm{0.01, 0.01};
  SymbolComponents never{"A", 0.0, std::nullopt, {}, 1.0};
  SymbolComponents always{"B", 1.0, GaussianCopula{Eigen::Matrix2d::Identity()},
                          {EmpiricalDistribution(pm), EmpiricalDistribution(nm)}, 1.0};
  cfg.symbols = {never, always};
  cfg.residual_copula = GaussianCopula{Eigen::Matrix3d::Identity()};
  std::vector<double> zres{-1.0, 0.0, 1.0};
  cfg.residual_marginals = {EmpiricalDistribution(zres), EmpiricalDistribution(zres), EmpiricalDistribution(zres)};
  auto obs = simulate_scenario(cfg);
  REQUIRE(obs.size() == 400);
  for (const auto& o : obs) {
    if (o.symbol == 0) {
      CHECK_FALSE(o.active);
      CHECK(o.pos == 0.0);
      CHECK(o.neg == 0.0);
    } else {
      CHECK(o.active);
      CHECK(o.pos == 0.03);
      CHECK(o.neg == 0.01);
    }
  }

  // closed loop: regressing log sigma on Neg recovers the slope
  ScenarioConfig loop = cfg;
  loop.beta = {{"Neg", 1.0}};
  std::vector<double> u;
  for (int i = 0; i <= 200; ++i)
    u.push_back(0.05 * i / 200.0);
  loop.symbols = {SymbolComponents{"C", 1.0, GaussianCopula{Eigen::Matrix2d::Identity()},
                                   {EmpiricalDistribution(u), EmpiricalDistribution(u)}, 1.0}};
  loop.residual_copula = GaussianCopula{Eigen::Matrix2d::Identity()};
  loop.residual_marginals = {EmpiricalDistribution(zres), EmpiricalDistribution(zres)};
  loop.n_days = 5000;
  std::vector<double> residuals;
  std::normal_distribution<double> z;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i)
    residuals.push_back(0.01 * z(rng));
  loop.residuals = residuals;
  auto sim = simulate_scenario(loop);
  double mx = 0, my = 0;
  for (const auto& o : sim) {
    mx += o.neg;
    my += o.log_vol;
  }
  mx /= static_cast<double>(sim.size());
  my /= static_cast<double>(sim.size());
  double sxy = 0, sxx = 0;
  for (const auto& o : sim) {
    sxy += (o.neg - mx) * (o.log_vol - my);
    sxx += (o.neg - mx) * (o.neg - mx);
  }
  CHECK(std::abs(sxy / sxx - 1.0) < 0.05);

  ScenarioConfig broken = cfg;
  broken.residuals.clear();
  CHECK(error_of([&] { simulate_scenario(broken); }) == Errc::missing_component);
}
