#include "newsflow/panel.hpp"

#include <cmath>

namespace newsflow::panel {

double SentimentIndex::score(std::span<const double> row) const
{
  if (static_cast<Eigen::Index>(row.size()) != loadings.size())
    throw Error(Errc::dimension_mismatch, "index row has the wrong width");
  double s = 0.0;
  for (Eigen::Index k = 0; k < loadings.size(); ++k)
    s += loadings(k) * row[static_cast<std::size_t>(k)] / sds(k);
  return s;
}

SentimentIndex pca_sentiment_index(const Eigen::MatrixXd& m)
{
  const auto n = m.rows();
  const auto k = m.cols();
  if (n < 3)
    throw Error(Errc::too_few_observations, "principal components need at least 3 observations");
  if (k < 1)
    throw Error(Errc::dimension_mismatch, "no columns");
  SentimentIndex out;
  out.means = m.colwise().mean().transpose();
  Eigen::MatrixXd z = m.rowwise() - out.means.transpose();
  out.sds = (z.colwise().squaredNorm() / static_cast<double>(n - 1)).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < k; ++j) {
    double scale = std::max(1.0, std::abs(out.means(j)));
    if (!(out.sds(j) > 1e-12 * scale))
      throw Error(Errc::constant_column, "column " + std::to_string(j) + " is constant");
    z.col(j) /= out.sds(j);
  }
  Eigen::MatrixXd corr = z.transpose() * z / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  if (eig.info() != Eigen::Success)
    throw Error(Errc::non_convergence, "eigen decomposition failed");
  out.eigenvalues = eig.eigenvalues().reverse();
  out.loadings = eig.eigenvectors().col(k - 1);
  if (out.loadings.sum() < 0)
    out.loadings = -out.loadings;
  out.loadings.normalize();
  out.explained_share = out.eigenvalues(0) / corr.trace();
  return out;
}

PcaProjection build_pca_series(const std::map<std::string, SymbolSeries>& by_lexicon)
{
  if (by_lexicon.size() < 2)
    throw Error(Errc::dimension_mismatch, "the sentiment index needs at least two lexica");
  const auto& first = by_lexicon.begin()->second;
  const auto k = static_cast<Eigen::Index>(by_lexicon.size());

  auto active_everywhere = [&](const std::string& symbol, std::size_t t) {
    for (const auto& [name, series] : by_lexicon) {
      auto it = series.find(symbol);
      if (it == series.end() || t >= it->second.size() || !it->second[t].active)
        return false;
    }
    return true;
  };
  auto row_of = [&](const std::string& symbol, std::size_t t, bool positive) {
    std::vector<double> row;
    for (const auto& [name, series] : by_lexicon) {
      const auto& rec = series.at(symbol)[t];
      row.push_back(positive ? rec.pos : rec.neg);
    }
    return row;
  };

  std::vector<std::pair<std::string, std::size_t>> keys;
  for (const auto& [symbol, series] : first)
    for (std::size_t t = 0; t < series.size(); ++t)
      if (active_everywhere(symbol, t))
        keys.emplace_back(symbol, t);

  Eigen::MatrixXd pos(static_cast<Eigen::Index>(keys.size()), k), neg(static_cast<Eigen::Index>(keys.size()), k);
  for (std::size_t r = 0; r < keys.size(); ++r) {
    auto p = row_of(keys[r].first, keys[r].second, true);
    auto q = row_of(keys[r].first, keys[r].second, false);
    for (Eigen::Index j = 0; j < k; ++j) {
      pos(static_cast<Eigen::Index>(r), j) = p[static_cast<std::size_t>(j)];
      neg(static_cast<Eigen::Index>(r), j) = q[static_cast<std::size_t>(j)];
    }
  }

  PcaProjection out;
  out.pos = pca_sentiment_index(pos);
  out.neg = pca_sentiment_index(neg);
  for (const auto& [symbol, series] : first) {
    auto& dst = out.series[symbol];
    dst = series;
    for (std::size_t t = 0; t < dst.size(); ++t) {
      dst[t].lexicon_name = "PCA";
      if (active_everywhere(symbol, t)) {
        dst[t].pos = out.pos.score(row_of(symbol, t, true));
        dst[t].neg = out.neg.score(row_of(symbol, t, false));
      } else {
        dst[t].active = false;
        dst[t].pos = 0.0;
        dst[t].neg = 0.0;
      }
    }
  }
  return out;
}

} // namespace newsflow::panel
