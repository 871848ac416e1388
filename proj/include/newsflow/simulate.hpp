#pragma once

#include "newsflow/error.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

/// Monte Carlo of sentiment-driven volatility: empirical marginals, Gaussian
/// copulas, MA(1)-GARCH(1,1) filtering, local-linear smoothing with uniform
/// bands.
namespace newsflow::simulate {

class EmpiricalDistribution {
public:
  EmpiricalDistribution() = default;
  /// Throws Error(too_few_points) for fewer than two values.
  explicit EmpiricalDistribution(std::vector<double> sample);

  /// #{x_i <= x} / (n + 1), floored at 1 / (n + 1).
  double cdf(double x) const;
  /// Smallest sample value whose cdf is >= u.
  double quantile(double u) const;

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }

private:
  std::vector<double> sorted_;
};

struct GaussianCopula {
  Eigen::MatrixXd correlation;
  bool repaired = false; ///< nearest-PSD repair was applied
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(correlation.rows()); }
};

/// Normal scores through each column's edf, then their sample correlation.
/// Throws Error(dimension_mismatch) when n < d + 1, Error(constant_column).
GaussianCopula fit_gaussian_copula(const Eigen::MatrixXd& data);

/// Clips negative eigenvalues and rescales to a unit diagonal. Returns true
/// when the matrix changed.
bool nearest_correlation(Eigen::MatrixXd& m);

/// Sequential conditional draws of correlated normals, mapped through the
/// normal cdf and each marginal quantile. Throws Error(non_psd_matrix) or
/// Error(dimension_mismatch).
Eigen::MatrixXd sample_copula(const GaussianCopula& copula, std::span<const EmpiricalDistribution> marginals,
                              std::size_t n, std::uint64_t seed);

/// Kolmogorov-Smirnov distance between two samples.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct GarchParams {
  double mu = 0, theta = 0, omega = 0, alpha = 0, beta = 0;
};

struct GarchFit {
  GarchParams params;
  double log_likelihood = 0;
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
};

/// Residuals and conditional variances with eps_0 = 0 and h_0 = sample
/// variance of r.
struct GarchFilter {
  std::vector<double> eps;
  std::vector<double> h;
};
GarchFilter garch_filter(std::span<const double> r, const GarchParams& p);

/// Gaussian quasi log-likelihood.
double garch_log_likelihood(std::span<const double> r, const GarchParams& p);

/// Nelder-Mead from three fixed starts on a transformed parameterization.
/// Throws Error(too_few_points) below 250 values, Error(non_convergence) for
/// a degenerate series, Error(non_stationary_solution) when alpha + beta
/// reaches 1.
GarchFit fit_ma1_garch11(std::span<const double> r);

struct Standardized {
  std::vector<double> z;
  std::vector<double> sigma;
};
Standardized standardize_residuals(std::span<const double> r, const GarchParams& p);

/// Simulated path after `burn` discarded values.
std::vector<double> simulate_ma1_garch11(const GarchParams& p, std::size_t n, std::uint64_t seed,
                                         std::size_t burn = 1000);

struct SmootherFit {
  std::vector<double> grid;
  std::vector<double> curve; ///< NaN where the neighborhood is empty
  std::vector<double> lower;
  std::vector<double> upper;
  double h = 0;
  double level = 0;
  double critical_value = 0;
  std::size_t empty_points = 0;
};

/// Direct plug-in bandwidth for local-linear regression with a Gaussian
/// kernel, capped at the range of x. Throws Error(degenerate_x) or
/// Error(too_few_points) below 20 points.
double plugin_bandwidth(std::span<const double> x, std::span<const double> y);

/// Equally spaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// Gaussian-kernel local-linear fit at each grid point. Points whose
/// kernel mass is too small are NaN and counted in empty_points.
SmootherFit local_linear_fit(std::span<const double> x, std::span<const double> y, double h,
                             std::span<const double> grid);

/// Multiplier-bootstrap simultaneous band. The critical value is never
/// below the pointwise normal quantile. Throws Error(too_few_bootstraps)
/// for n_boot < 100.
SmootherFit uniform_band(const SmootherFit& fit, std::span<const double> x, std::span<const double> y,
                         double level = 0.95, std::size_t n_boot = 500, std::uint64_t seed = 1);

struct Interval {
  double lo = 0;
  double hi = 0;
  bool neg_above = true; ///< the second fit's band lies above the first's
};

/// Grid intervals where the bands do not overlap; consecutive separated
/// points with the same ordering form one interval. Throws
/// Error(grid_mismatch).
std::vector<Interval> band_overlap_region(const SmootherFit& fit_pos, const SmootherFit& fit_neg);

struct SymbolComponents {
  std::string symbol;
  double p = 0; ///< article arrival probability
  std::optional<GaussianCopula> copula;          ///< over (Pos, Neg)
  std::vector<EmpiricalDistribution> marginals;  ///< Pos, Neg
  double sigma_scale = 1; ///< median conditional sd of the symbol's returns
};

struct ScenarioConfig {
  double alpha = 0;
  /// Coefficients by regressor name; I, Pos, Neg, R_M, VIX and R are used.
  std::map<std::string, double> beta;
  std::vector<double> residuals;
  std::vector<SymbolComponents> symbols;
  /// Joint copula of standardized residuals: market first, then symbols.
  std::optional<GaussianCopula> residual_copula;
  std::vector<EmpiricalDistribution> residual_marginals;
  double market_sigma_scale = 1;
  double vix = 0;
  std::size_t n_days = 0;
  std::uint64_t seed = 0;
};

struct SimulatedObservation {
  std::size_t symbol = 0;
  std::size_t day = 0;
  bool active = false;
  double pos = 0, neg = 0;
  double market_return = 0;
  double ret = 0;
  double log_vol = 0;
};

/// Throws Error(missing_component) naming the absent piece.
std::vector<SimulatedObservation> simulate_scenario(const ScenarioConfig& config);

/// Smoothed log volatility against Pos and against Neg on the common
/// support of both, with uniform bands and the intervals where they separate.
struct AsymmetryCurves {
  std::vector<double> grid;
  SmootherFit pos;
  SmootherFit neg;
  std::vector<Interval> separated;
};

/// Uses every observation, inactive days included. Band seeds derive from
/// `seed`. Throws Error(degenerate_x) when the two supports do not overlap.
AsymmetryCurves asymmetry_curves(std::span<const SimulatedObservation> obs, std::size_t grid_points, double level,
                                 std::size_t n_boot, std::uint64_t seed);

} // namespace newsflow::simulate
