#include "newsflow/simulate.hpp"

#include "newsflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace newsflow::simulate {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Sorted {
  std::vector<double> x, y;
};

Sorted sort_pairs(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size())
    throw Error(Errc::dimension_mismatch, "x and y differ in length");
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  Sorted s;
  s.x.reserve(x.size());
  s.y.reserve(x.size());
  for (auto i : idx) {
    s.x.push_back(x[i]);
    s.y.push_back(y[i]);
  }
  return s;
}

/// Least squares polynomial of the given degree on x in [first, last),
/// in the standardized variable u = (x - c) / s.
struct PolyFit {
  Eigen::VectorXd a;
  double c = 0, s = 1;
  double rss = 0;
};

PolyFit fit_poly(const Sorted& d, std::size_t first, std::size_t last, int degree)
{
  const auto m = static_cast<Eigen::Index>(last - first);
  PolyFit out;
  double lo = d.x[first], hi = d.x[last - 1];
  out.c = 0.5 * (lo + hi);
  out.s = hi > lo ? 0.5 * (hi - lo) : 1.0;
  Eigen::MatrixXd X(m, degree + 1);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double u = (d.x[first + static_cast<std::size_t>(i)] - out.c) / out.s;
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      X(i, k) = p;
      p *= u;
    }
    y(i) = d.y[first + static_cast<std::size_t>(i)];
  }
  out.a = X.colPivHouseholderQr().solve(y);
  out.rss = (y - X * out.a).squaredNorm();
  return out;
}

/// Index range of sorted x within [lo, hi].
std::pair<std::size_t, std::size_t> window(const std::vector<double>& x, double lo, double hi)
{
  auto a = std::lower_bound(x.begin(), x.end(), lo) - x.begin();
  auto b = std::upper_bound(x.begin(), x.end(), hi) - x.begin();
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

/// Local-linear equivalent-kernel weights at x0 over indices [first, last).
/// Returns false when the neighborhood carries too little mass.
bool ll_weights(std::span<const double> x, double x0, double h, std::size_t first, std::size_t last,
                std::vector<double>& l)
{
  l.assign(x.size(), 0.0);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    double u = (x[i] - x0) / h;
    double w = std::exp(-0.5 * u * u);
    l[i] = w;
    s0 += w;
    s1 += w * (x[i] - x0);
  }
  if (!(s0 > 1e-10))
    return false;
  double dbar = s1 / s0;
  double sd2 = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    double dd = x[i] - x0 - dbar;
    sd2 += l[i] * dd * dd;
  }
  if (!(sd2 / s0 > 1e-24 * h * h))
    return false;
  for (std::size_t i = first; i < last; ++i) {
    double w = l[i];
    l[i] = w / s0 - dbar * w * (x[i] - x0 - dbar) / sd2;
  }
  return true;
}

/// Second derivative at x0 of a Gaussian-weighted local cubic.
std::optional<double> local_cubic_second_derivative(const Sorted& d, double x0, double g)
{
  auto [first, last] = window(d.x, x0 - 8 * g, x0 + 8 * g);
  if (last - first < 5)
    return std::nullopt;
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  Eigen::Vector4d b = Eigen::Vector4d::Zero();
  for (std::size_t i = first; i < last; ++i) {
    double u = (d.x[i] - x0) / g;
    double w = std::exp(-0.5 * u * u);
    Eigen::Vector4d p(1.0, u, u * u, u * u * u);
    A.noalias() += w * p * p.transpose();
    b.noalias() += w * d.y[i] * p;
  }
  Eigen::FullPivLU<Eigen::Matrix4d> lu(A);
  if (lu.rank() < 4)
    return std::nullopt;
  Eigen::Vector4d c = lu.solve(b);
  return 2.0 * c(2) / (g * g);
}

} // namespace

std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
  if (n < 2)
    throw Error(Errc::invalid_value, "grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

double plugin_bandwidth(std::span<const double> x, std::span<const double> y)
{
  if (x.size() < 20)
    throw Error(Errc::too_few_points, "bandwidth selection needs at least 20 points");
  Sorted d = sort_pairs(x, y);
  const std::size_t n = d.x.size();
  const double a = d.x.front(), b = d.x.back();
  const double range = b - a;
  if (!(range > 0))
    throw Error(Errc::degenerate_x, "all x values are equal");
  const double nd = static_cast<double>(n);

  // blocked quartic fits, number of blocks by Mallows' Cp
  const std::size_t n_max = std::max<std::size_t>(std::min<std::size_t>(n / 20, 5), 1);
  auto blocked = [&](std::size_t nb) {
    std::vector<PolyFit> fits;
    std::vector<std::size_t> bounds;
    for (std::size_t k = 0; k <= nb; ++k)
      bounds.push_back(k * n / nb);
    for (std::size_t k = 0; k < nb; ++k)
      fits.push_back(fit_poly(d, bounds[k], bounds[k + 1], 4));
    return std::make_pair(fits, bounds);
  };
  auto rss_of = [](const std::vector<PolyFit>& fits) {
    double s = 0.0;
    for (const auto& f : fits)
      s += f.rss;
    return s;
  };
  const double rss_max = rss_of(blocked(n_max).first);
  const double denom = rss_max / (nd - 5.0 * static_cast<double>(n_max));
  std::size_t n_blocks = 1;
  double best_cp = std::numeric_limits<double>::infinity();
  for (std::size_t nb = 1; nb <= n_max; ++nb) {
    double rss = rss_of(blocked(nb).first);
    double cp = denom > 0 ? rss / denom - (nd - 10.0 * static_cast<double>(nb)) : static_cast<double>(nb);
    if (cp < best_cp) {
      best_cp = cp;
      n_blocks = nb;
    }
  }
  auto [fits, bounds] = blocked(n_blocks);
  double sigma2_q = rss_of(fits) / (nd - 5.0 * static_cast<double>(n_blocks));
  double theta24 = 0.0;
  for (std::size_t k = 0; k < n_blocks; ++k) {
    const auto& f = fits[k];
    for (std::size_t i = bounds[k]; i < bounds[k + 1]; ++i) {
      double u = (d.x[i] - f.c) / f.s;
      double m2 = (2 * f.a(2) + 6 * f.a(3) * u + 12 * f.a(4) * u * u) / (f.s * f.s);
      double m4 = 24 * f.a(4) / std::pow(f.s, 4);
      theta24 += m2 * m4;
    }
  }
  theta24 /= nd;

  // pilot bandwidth for the curvature functional
  const double c3 = 0.5 + 2 * std::sqrt(2.0) - 4.0 / 3.0 * std::sqrt(3.0);
  const double c3k = std::pow(4 * c3 / std::sqrt(2 * std::numbers::pi), 1.0 / 7.0);
  double g = range;
  if (std::abs(theta24) > 0 && sigma2_q > 0)
    g = std::min(range, c3k * std::pow(sigma2_q * range / (std::abs(theta24) * nd), 1.0 / 7.0));
  g = std::max(g, range * 1e-3);

  // curvature over the middle 90% of points
  const std::size_t trim = n / 20;
  double theta22 = 0.0;
  std::size_t used = 0;
  for (std::size_t i = trim; i < n - trim; ++i) {
    if (auto m2 = local_cubic_second_derivative(d, d.x[i], g)) {
      theta22 += *m2 * *m2;
      ++used;
    }
  }
  theta22 = used > 0 ? theta22 / static_cast<double>(used) : 0.0;
  // curvature at rounding level means a straight line: use the cap
  if (!(std::sqrt(theta22) * range * range > 1e-8 * stats::sample_sd(d.y)))
    theta22 = 0.0;

  const double rk = 1.0 / (2.0 * std::sqrt(std::numbers::pi));
  auto amise = [&](double s2) {
    if (!(theta22 > 0) || !(s2 > 0))
      return range;
    return std::min(range, std::pow(rk * s2 * range / (theta22 * nd), 0.2));
  };

  // residual variance from a local-linear fit at the preliminary bandwidth
  double h0 = amise(sigma2_q);
  double rss = 0.0, tr_s = 0.0, tr_ss = 0.0;
  std::vector<double> l;
  for (std::size_t i = 0; i < n; ++i) {
    auto [first, last] = window(d.x, d.x[i] - 8 * h0, d.x[i] + 8 * h0);
    if (!ll_weights(d.x, d.x[i], h0, first, last, l))
      continue;
    double fit = 0.0, ss = 0.0;
    for (std::size_t j = first; j < last; ++j) {
      fit += l[j] * d.y[j];
      ss += l[j] * l[j];
    }
    rss += (d.y[i] - fit) * (d.y[i] - fit);
    tr_s += l[i];
    tr_ss += ss;
  }
  double dof = nd - 2 * tr_s + tr_ss;
  double sigma2 = dof > 0 ? rss / dof : sigma2_q;
  return amise(sigma2);
}

SmootherFit local_linear_fit(std::span<const double> x, std::span<const double> y, double h,
                             std::span<const double> grid)
{
  if (x.size() != y.size())
    throw Error(Errc::dimension_mismatch, "x and y differ in length");
  if (!(h > 0) || !std::isfinite(h))
    throw Error(Errc::invalid_value, "bandwidth must be positive");
  for (std::size_t g = 1; g < grid.size(); ++g)
    if (!(grid[g] > grid[g - 1]))
      throw Error(Errc::invalid_value, "grid must be strictly increasing");
  SmootherFit out;
  out.grid.assign(grid.begin(), grid.end());
  out.h = h;
  out.curve.assign(grid.size(), nan);
  std::vector<double> l;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!ll_weights(x, grid[g], h, 0, x.size(), l)) {
      ++out.empty_points;
      continue;
    }
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      m += l[i] * y[i];
    out.curve[g] = m;
  }
  out.lower = out.curve;
  out.upper = out.curve;
  return out;
}

SmootherFit uniform_band(const SmootherFit& fit, std::span<const double> x, std::span<const double> y, double level,
                         std::size_t n_boot, std::uint64_t seed)
{
  if (n_boot < 100)
    throw Error(Errc::too_few_bootstraps, "uniform band needs at least 100 bootstrap draws, got " +
                                              std::to_string(n_boot));
  if (!(level > 0 && level < 1))
    throw Error(Errc::invalid_value, "band level must be in (0,1)");
  if (x.size() != y.size())
    throw Error(Errc::dimension_mismatch, "x and y differ in length");
  const std::size_t n = x.size();
  const std::size_t n_grid = fit.grid.size();

  // global noise level from the normalized residual sum of squares,
  // rss / (n - 2 tr(L) + tr(L'L))
  std::vector<double> l;
  double rss = 0.0, nu1 = 0.0, nu2 = 0.0, used = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ll_weights(x, x[i], fit.h, 0, n, l))
      continue;
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      m += l[j] * y[j];
      nu2 += l[j] * l[j];
    }
    nu1 += l[i];
    rss += (y[i] - m) * (y[i] - m);
    used += 1.0;
  }
  const double dof = used - 2.0 * nu1 + nu2;
  const double sigma = dof > 1e-8 ? std::sqrt(rss / dof) : 0.0;
  const std::vector<double> e(n, sigma);

  // oversmoothed pilot curve; smoothing it again at h estimates the bias of
  // the fit, which the bootstrap curves carry along
  double range = 0.0;
  if (n > 0) {
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    range = *hi - *lo;
  }
  const double g_pilot = std::min(range, fit.h * std::pow(static_cast<double>(n), 4.0 / 45.0));
  std::vector<double> pilot(n, 0.0);
  bool pilot_ok = g_pilot > fit.h;
  for (std::size_t i = 0; i < n && pilot_ok; ++i) {
    if (!ll_weights(x, x[i], g_pilot, 0, n, l)) {
      pilot_ok = false;
      break;
    }
    for (std::size_t j = 0; j < n; ++j)
      pilot[i] += l[j] * y[j];
  }

  // weighted kernel rows l_gi * e_i, pointwise standard errors and bias terms
  std::vector<std::vector<double>> le(n_grid);
  std::vector<double> se(n_grid, 0.0), bias(n_grid, 0.0);
  std::vector<bool> ok(n_grid, false);
  for (std::size_t g = 0; g < n_grid; ++g) {
    if (std::isnan(fit.curve[g]) || !ll_weights(x, fit.grid[g], fit.h, 0, n, l))
      continue;
    le[g].resize(n);
    double v = 0.0, smoothed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      le[g][i] = l[i] * e[i];
      v += le[g][i] * le[g][i];
      smoothed += l[i] * pilot[i];
    }
    se[g] = std::sqrt(v);
    ok[g] = se[g] > 0;
    if (pilot_ok && ll_weights(x, fit.grid[g], g_pilot, 0, n, l)) {
      double at = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        at += l[i] * y[i];
      bias[g] = smoothed - at;
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> sup(n_boot, 0.0);
  std::vector<double> xi(n);
  for (std::size_t b = 0; b < n_boot; ++b) {
    for (auto& v : xi)
      v = normal(rng);
    double m = 0.0;
    for (std::size_t g = 0; g < n_grid; ++g) {
      if (!ok[g])
        continue;
      double s = 0.0;
      const auto& row = le[g];
      for (std::size_t i = 0; i < n; ++i)
        s += row[i] * xi[i];
      m = std::max(m, std::abs(s + bias[g]) / se[g]);
    }
    sup[b] = m;
  }
  double crit = stats::quantile(sup, level);
  crit = std::max(crit, stats::normal_quantile(0.5 + 0.5 * level));

  SmootherFit out = fit;
  out.level = level;
  out.critical_value = crit;
  for (std::size_t g = 0; g < n_grid; ++g) {
    if (std::isnan(fit.curve[g]))
      continue;
    out.lower[g] = fit.curve[g] - crit * se[g];
    out.upper[g] = fit.curve[g] + crit * se[g];
  }
  return out;
}

std::vector<Interval> band_overlap_region(const SmootherFit& fit_pos, const SmootherFit& fit_neg)
{
  const auto& g = fit_pos.grid;
  if (g.size() != fit_neg.grid.size())
    throw Error(Errc::grid_mismatch, "fits use grids of different size");
  for (std::size_t i = 0; i < g.size(); ++i) {
    double tol = 1e-12 * std::max(1.0, std::abs(g[i]));
    if (std::abs(g[i] - fit_neg.grid[i]) > tol)
      throw Error(Errc::grid_mismatch, "fits use different grids");
  }
  std::vector<Interval> out;
  int prev = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    int state = 0;
    if (fit_neg.lower[i] > fit_pos.upper[i])
      state = 1;
    else if (fit_pos.lower[i] > fit_neg.upper[i])
      state = -1;
    if (state != 0) {
      if (state == prev)
        out.back().hi = g[i];
      else
        out.push_back({g[i], g[i], state == 1});
    }
    prev = state;
  }
  return out;
}

} // namespace newsflow::simulate
