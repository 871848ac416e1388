#include "newsflow/simulate.hpp"

#include "newsflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace newsflow::simulate {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> sample) : sorted_(std::move(sample))
{
  if (sorted_.size() < 2)
    throw Error(Errc::too_few_points, "empirical distribution needs at least two values");
  for (double v : sorted_)
    if (!std::isfinite(v))
      throw Error(Errc::invalid_value, "empirical distribution sample is not finite");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const
{
  auto count = static_cast<double>(std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin());
  return std::max(count, 1.0) / static_cast<double>(sorted_.size() + 1);
}

double EmpiricalDistribution::quantile(double u) const
{
  const auto n = sorted_.size();
  // tolerance keeps quantile(cdf(x_k)) on x_k despite rounding in k/(n+1)
  double k = std::ceil(u * static_cast<double>(n + 1) - 1e-9);
  k = std::clamp(k, 1.0, static_cast<double>(n));
  return sorted_[static_cast<std::size_t>(k) - 1];
}

bool nearest_correlation(Eigen::MatrixXd& m)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  Eigen::VectorXd values = eig.eigenvalues();
  if (values.minCoeff() >= 0.0)
    return false;
  values = values.cwiseMax(0.0);
  Eigen::MatrixXd r = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  Eigen::VectorXd d = r.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  m = d.asDiagonal() * r * d.asDiagonal();
  m = 0.5 * (m + m.transpose());
  m.diagonal().setOnes();
  return true;
}

GaussianCopula fit_gaussian_copula(const Eigen::MatrixXd& data)
{
  const auto n = data.rows();
  const auto d = data.cols();
  if (d < 1 || n < d + 1)
    throw Error(Errc::dimension_mismatch, "copula needs at least d+1 observations");
  Eigen::MatrixXd scores(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    std::vector<double> col(data.col(j).data(), data.col(j).data() + n);
    EmpiricalDistribution edf(col);
    if (edf.sorted().front() == edf.sorted().back())
      throw Error(Errc::constant_column, "copula column " + std::to_string(j) + " is constant");
    for (Eigen::Index i = 0; i < n; ++i)
      scores(i, j) = stats::normal_quantile(edf.cdf(data(i, j)));
  }
  Eigen::MatrixXd centered = scores.rowwise() - scores.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::VectorXd inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
  GaussianCopula out;
  out.correlation = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  out.correlation = 0.5 * (out.correlation + out.correlation.transpose());
  out.correlation.diagonal().setOnes();
  out.repaired = nearest_correlation(out.correlation);
  return out;
}

namespace {

/// Lower-triangular factor of the conditional decomposition; zero pivots
/// (perfectly dependent coordinates) give zero columns.
Eigen::MatrixXd conditional_factor(const Eigen::MatrixXd& c)
{
  const auto d = c.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double pivot = c(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot < -1e-8)
      throw Error(Errc::non_psd_matrix, "correlation matrix is not positive semidefinite");
    if (pivot <= 1e-12)
      continue;
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < d; ++i)
      l(i, j) = (c(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  return l;
}

} // namespace

Eigen::MatrixXd sample_copula(const GaussianCopula& copula, std::span<const EmpiricalDistribution> marginals,
                              std::size_t n, std::uint64_t seed)
{
  const auto d = copula.correlation.rows();
  if (static_cast<Eigen::Index>(marginals.size()) != d || copula.correlation.cols() != d)
    throw Error(Errc::dimension_mismatch, "marginal count differs from copula dimension");
  Eigen::MatrixXd l = conditional_factor(copula.correlation);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), d);
  Eigen::VectorXd e(d);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    for (Eigen::Index j = 0; j < d; ++j)
      e(j) = normal(rng);
    Eigen::VectorXd z = l * e;
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = marginals[static_cast<std::size_t>(j)].quantile(stats::normal_cdf(z(j)));
  }
  return out;
}

double ks_distance(std::vector<double> a, std::vector<double> b)
{
  if (a.empty() || b.empty())
    throw Error(Errc::too_few_points, "KS distance of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x)
      ++i;
    while (j < b.size() && b[j] <= x)
      ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

} // namespace newsflow::simulate
