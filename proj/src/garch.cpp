#include "newsflow/simulate.hpp"

#include "newsflow/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

namespace newsflow::simulate {

namespace {

double sample_variance(std::span<const double> r)
{
  double sd = stats::sample_sd(r);
  return sd * sd;
}

constexpr std::size_t dim = 5;
using Point = std::array<double, dim>;

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

/// Unconstrained point -> parameters on the unit-variance scale.
GarchParams decode(const Point& x)
{
  GarchParams p;
  p.mu = x[0];
  p.theta = std::tanh(x[1]);
  p.omega = std::exp(x[2]);
  double persistence = logistic(x[3]);
  double share = logistic(x[4]);
  p.alpha = persistence * share;
  p.beta = persistence * (1.0 - share);
  return p;
}

Point encode(double mu, double theta, double persistence, double share)
{
  return {mu, std::atanh(theta), std::log(1.0 - persistence), logit(persistence), logit(share)};
}

struct NelderMead {
  std::function<double(const Point&)> f;
  std::size_t evaluations = 0;
  std::size_t max_evaluations = 20000;

  double eval(const Point& x)
  {
    ++evaluations;
    double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }

  /// Minimizes from `start`; returns the best vertex and its value.
  std::pair<Point, double> run(const Point& start, double step)
  {
    std::array<Point, dim + 1> s;
    std::array<double, dim + 1> v;
    s[0] = start;
    for (std::size_t i = 0; i < dim; ++i) {
      s[i + 1] = start;
      s[i + 1][i] += step;
    }
    for (std::size_t i = 0; i <= dim; ++i)
      v[i] = eval(s[i]);
    std::size_t budget = evaluations + max_evaluations;
    while (evaluations < budget) {
      std::array<std::size_t, dim + 1> order;
      for (std::size_t i = 0; i <= dim; ++i)
        order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
      auto best = order.front(), worst = order.back(), second = order[dim - 1];
      if (std::abs(v[worst] - v[best]) <= 1e-11 * (1.0 + std::abs(v[best])))
        break;
      Point c{};
      for (std::size_t i = 0; i <= dim; ++i)
        if (i != worst)
          for (std::size_t k = 0; k < dim; ++k)
            c[k] += s[i][k] / static_cast<double>(dim);
      auto along = [&](double t) {
        Point p;
        for (std::size_t k = 0; k < dim; ++k)
          p[k] = c[k] + t * (s[worst][k] - c[k]);
        return p;
      };
      Point xr = along(-1.0);
      double fr = eval(xr);
      if (fr < v[best]) {
        Point xe = along(-2.0);
        double fe = eval(xe);
        if (fe < fr) {
          s[worst] = xe;
          v[worst] = fe;
        } else {
          s[worst] = xr;
          v[worst] = fr;
        }
      } else if (fr < v[second]) {
        s[worst] = xr;
        v[worst] = fr;
      } else {
        bool outside = fr < v[worst];
        Point xc = along(outside ? -0.5 : 0.5);
        double fc = eval(xc);
        if (fc < (outside ? fr : v[worst])) {
          s[worst] = xc;
          v[worst] = fc;
        } else {
          for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best)
              continue;
            for (std::size_t k = 0; k < dim; ++k)
              s[i][k] = s[best][k] + 0.5 * (s[i][k] - s[best][k]);
            v[i] = eval(s[i]);
          }
        }
      }
    }
    auto it = std::min_element(v.begin(), v.end());
    return {s[static_cast<std::size_t>(it - v.begin())], *it};
  }
};

} // namespace

GarchFilter garch_filter(std::span<const double> r, const GarchParams& p)
{
  GarchFilter out;
  out.eps.resize(r.size());
  out.h.resize(r.size());
  double eps_prev = 0.0;
  double h_prev = r.size() > 1 ? sample_variance(r) : 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    double h = p.omega + p.alpha * eps_prev * eps_prev + p.beta * h_prev;
    double e = r[t] - p.mu - p.theta * eps_prev;
    out.eps[t] = e;
    out.h[t] = h;
    eps_prev = e;
    h_prev = h;
  }
  return out;
}

double garch_log_likelihood(std::span<const double> r, const GarchParams& p)
{
  auto f = garch_filter(r, p);
  const double log2pi = std::log(2.0 * std::numbers::pi);
  double ll = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (!(f.h[t] > 0))
      return -std::numeric_limits<double>::infinity();
    ll -= 0.5 * (log2pi + std::log(f.h[t]) + f.eps[t] * f.eps[t] / f.h[t]);
  }
  return ll;
}

GarchFit fit_ma1_garch11(std::span<const double> r)
{
  if (r.size() < 250)
    throw Error(Errc::too_few_points, "GARCH estimation needs at least 250 observations, got " +
                                          std::to_string(r.size()));
  for (double v : r)
    if (!std::isfinite(v))
      throw Error(Errc::invalid_value, "return series contains a non-finite value");
  const double mean = stats::mean(r);
  const double var = sample_variance(r);
  if (!(var > 1e-300) || var < 1e-12 * mean * mean)
    throw Error(Errc::non_convergence, "return series has zero variance");
  const double scale = std::sqrt(var);
  std::vector<double> z(r.size());
  for (std::size_t t = 0; t < r.size(); ++t)
    z[t] = r[t] / scale;

  NelderMead nm;
  nm.f = [&](const Point& x) { return -garch_log_likelihood(z, decode(x)); };

  const double m = mean / scale;
  const std::array<Point, 3> starts{encode(m, 0.0, 0.90, 0.10), encode(m, 0.2, 0.97, 0.05),
                                    encode(m, -0.1, 0.50, 0.30)};
  Point best{};
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t restarts = 0;
  for (const auto& start : starts) {
    auto [x, v] = nm.run(start, 0.5);
    // restart from the best vertex until the likelihood stops improving
    for (int k = 0; k < 50; ++k) {
      auto [x2, v2] = nm.run(x, 0.1);
      ++restarts;
      bool improved = v - v2 >= 1e-8;
      if (v2 < v) {
        x = x2;
        v = v2;
      }
      if (!improved)
        break;
    }
    if (v < best_value) {
      best_value = v;
      best = x;
    }
  }
  if (!std::isfinite(best_value))
    throw Error(Errc::non_convergence, "no finite likelihood found after " + std::to_string(nm.evaluations) +
                                           " evaluations");

  GarchParams p = decode(best);
  if (p.alpha + p.beta >= 1.0 - 1e-6)
    throw Error(Errc::non_stationary_solution, "alpha + beta = " + std::to_string(p.alpha + p.beta));
  GarchFit fit;
  fit.params = {p.mu * scale, p.theta, p.omega * var, p.alpha, p.beta};
  fit.log_likelihood = garch_log_likelihood(r, fit.params);
  fit.evaluations = nm.evaluations;
  fit.restarts = restarts;
  return fit;
}

Standardized standardize_residuals(std::span<const double> r, const GarchParams& p)
{
  auto f = garch_filter(r, p);
  Standardized out;
  out.z.resize(r.size());
  out.sigma.resize(r.size());
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (!(f.h[t] > 0.0) || !std::isfinite(f.h[t]))
      throw Error(Errc::non_convergence, "conditional variance is not positive at t=" + std::to_string(t));
    out.sigma[t] = std::sqrt(f.h[t]);
    out.z[t] = f.eps[t] / out.sigma[t];
  }
  return out;
}

std::vector<double> simulate_ma1_garch11(const GarchParams& p, std::size_t n, std::uint64_t seed, std::size_t burn)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double persistence = p.alpha + p.beta;
  double h = persistence < 1.0 ? p.omega / (1.0 - persistence) : p.omega;
  double eps = 0.0;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n + burn; ++t) {
    h = p.omega + p.alpha * eps * eps + p.beta * h;
    double e = std::sqrt(h) * normal(rng);
    double r = p.mu + e + p.theta * eps;
    eps = e;
    if (t >= burn)
      out.push_back(r);
  }
  return out;
}

} // namespace newsflow::simulate
