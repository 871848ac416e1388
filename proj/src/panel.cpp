#include "newsflow/panel.hpp"

#include "newsflow/stats.hpp"
#include "newsflow/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace newsflow::panel {

std::string_view to_string(Dependent d) noexcept
{
  switch (d) {
  case Dependent::log_vol:
    return "log_vol";
  case Dependent::volume:
    return "volume";
  case Dependent::ret:
    return "ret";
  }
  return "?";
}

std::optional<Dependent> parse_dependent(std::string_view name)
{
  for (auto d : {Dependent::log_vol, Dependent::volume, Dependent::ret})
    if (to_string(d) == name)
      return d;
  return std::nullopt;
}

std::string_view to_string(CovarianceMode m) noexcept
{
  switch (m) {
  case CovarianceMode::classical:
    return "classical";
  case CovarianceMode::hc:
    return "hc";
  case CovarianceMode::by_entity:
    return "by_entity";
  case CovarianceMode::by_time:
    return "by_time";
  case CovarianceMode::two_way:
    return "two_way";
  }
  return "?";
}

std::optional<CovarianceMode> parse_covariance_mode(std::string_view name)
{
  for (auto m : {CovarianceMode::classical, CovarianceMode::hc, CovarianceMode::by_entity, CovarianceMode::by_time,
                 CovarianceMode::two_way})
    if (to_string(m) == name)
      return m;
  return std::nullopt;
}

SymbolSeries by_symbol(std::span<const sentiment::SentimentRecord> records, std::size_t n_days)
{
  SymbolSeries out;
  for (const auto& r : records) {
    auto& series = out[r.symbol];
    if (series.empty()) {
      series.resize(n_days);
      for (std::size_t t = 0; t < n_days; ++t) {
        series[t].symbol = r.symbol;
        series[t].day = t;
        series[t].lexicon_name = r.lexicon_name;
      }
    }
    if (r.day >= n_days)
      throw Error(Errc::calendar_mismatch, r.symbol + ": sentiment day outside the calendar");
    series[r.day] = r;
  }
  return out;
}

std::string PanelSpec::id() const
{
  std::string out = subsample_name + "/" + std::string(to_string(dependent)) + "/" + projection + "/h" +
                    std::to_string(h);
  if (cumulative)
    out += 'c';
  return out;
}

const std::vector<std::string>& regressor_names()
{
  static const std::vector<std::string> names{"I", "Pos", "Neg", "R_M", "VIX", "log_vol", "V", "R"};
  return names;
}

PanelDataset assemble_panel(const SymbolSeries& sentiment, const IndicatorMap& indicators,
                            const indicators::MarketSeries& market, const PanelSpec& spec)
{
  if (spec.h < 1 || spec.h > 5)
    throw Error(Errc::invalid_value, "lag h must be in 1..5, got " + std::to_string(spec.h));
  const std::size_t n_days = market.market_return.size();
  if (market.vix.size() != n_days)
    throw Error(Errc::calendar_mismatch, "market series lengths differ");

  struct Row {
    std::array<double, 8> x;
    double y;
    std::size_t t;
  };
  PanelDataset out;
  out.spec = spec;
  out.columns = regressor_names();
  std::vector<std::vector<Row>> per_entity;

  for (const auto& [symbol, records] : sentiment) {
    if (spec.subsample && !spec.subsample->count(symbol))
      continue;
    auto it = indicators.find(symbol);
    if (it == indicators.end())
      continue;
    const auto& ind = it->second;
    if (records.size() != n_days || ind.size() != n_days)
      throw Error(Errc::calendar_mismatch, symbol + ": series length differs from the market calendar");
    std::vector<Row> rows;
    for (std::size_t t = 0; t + spec.h < n_days; ++t) {
      const auto& now = ind[t];
      const auto& later = ind[t + spec.h];
      std::optional<double> y = spec.dependent == Dependent::log_vol  ? later.log_vol
                                : spec.dependent == Dependent::volume ? later.detrended_volume
                                                                      : later.ret;
      auto rm = market.market_return[t];
      auto vix = market.vix[t];
      if (!y || !rm || !vix || !now.log_vol || !now.detrended_volume || !now.ret) {
        ++out.dropped_missing;
        continue;
      }
      auto rec = spec.cumulative ? sentiment::cumulative_record(records, t, spec.h) : records[t];
      rows.push_back({{rec.active ? 1.0 : 0.0, rec.pos, rec.neg, *rm, *vix, *now.log_vol, *now.detrended_volume,
                       *now.ret},
                      *y,
                      t});
    }
    if (rows.size() < 2) {
      out.dropped_entities += rows.empty() ? 0 : 1;
      continue;
    }
    out.entities.push_back(symbol);
    per_entity.push_back(std::move(rows));
  }

  std::size_t n = 0;
  for (const auto& rows : per_entity)
    n += rows.size();
  if (n == 0)
    throw Error(Errc::empty_panel, "no complete observations for " + spec.id());
  out.X.resize(static_cast<Eigen::Index>(n), 8);
  out.y.resize(static_cast<Eigen::Index>(n));
  Eigen::Index r = 0;
  for (std::size_t e = 0; e < per_entity.size(); ++e) {
    for (const auto& row : per_entity[e]) {
      for (Eigen::Index c = 0; c < 8; ++c)
        out.X(r, c) = row.x[static_cast<std::size_t>(c)];
      out.y(r) = row.y;
      out.entity.push_back(e);
      out.time.push_back(row.t);
      ++r;
    }
  }
  return out;
}

Eigen::MatrixXd within_transform(const Eigen::MatrixXd& m, std::span<const std::size_t> entity,
                                 std::size_t n_entities)
{
  if (static_cast<std::size_t>(m.rows()) != entity.size())
    throw Error(Errc::dimension_mismatch, "entity index length differs from row count");
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_entities), m.cols());
  std::vector<double> counts(n_entities, 0.0);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto e = static_cast<Eigen::Index>(entity[static_cast<std::size_t>(r)]);
    sums.row(e) += m.row(r);
    counts[static_cast<std::size_t>(e)] += 1.0;
  }
  Eigen::MatrixXd out = m;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto e = entity[static_cast<std::size_t>(r)];
    out.row(r) -= sums.row(static_cast<Eigen::Index>(e)) / counts[e];
  }
  return out;
}

Eigen::MatrixXd hc0_covariance(const Eigen::MatrixXd& X, const Eigen::VectorXd& e)
{
  std::vector<std::size_t> ids(static_cast<std::size_t>(X.rows()));
  std::iota(ids.begin(), ids.end(), 0);
  return sandwich_covariance(X, e, ids, false);
}

Eigen::MatrixXd sandwich_covariance(const Eigen::MatrixXd& X, const Eigen::VectorXd& e,
                                    std::span<const std::size_t> cluster, bool small_sample)
{
  const auto n = X.rows();
  const auto k = X.cols();
  if (e.size() != n || static_cast<Eigen::Index>(cluster.size()) != n)
    throw Error(Errc::dimension_mismatch, "sandwich inputs differ in length");
  std::map<std::size_t, Eigen::VectorXd> scores;
  for (Eigen::Index r = 0; r < n; ++r) {
    auto [it, fresh] = scores.try_emplace(cluster[static_cast<std::size_t>(r)], Eigen::VectorXd::Zero(k));
    it->second += X.row(r).transpose() * e(r);
  }
  const auto g = static_cast<double>(scores.size());
  if (scores.size() < 2)
    throw Error(Errc::single_cluster, "clustered covariance needs at least two clusters");
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (const auto& [id, s] : scores)
    meat.noalias() += s * s.transpose();
  Eigen::MatrixXd bread = (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd v = bread * meat * bread;
  if (small_sample) {
    auto nn = static_cast<double>(n);
    v *= g / (g - 1.0) * (nn - 1.0) / (nn - static_cast<double>(k));
  }
  return 0.5 * (v + v.transpose());
}

bool repair_psd(Eigen::MatrixXd& m)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Eigen::VectorXd values = eig.eigenvalues();
  if (values.minCoeff() >= 0.0)
    return false;
  values = values.cwiseMax(0.0);
  m = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  m = 0.5 * (m + m.transpose());
  return true;
}

std::string stars(double p)
{
  if (std::isnan(p))
    return "";
  if (p < 0.01)
    return "***";
  if (p < 0.05)
    return "**";
  if (p < 0.1)
    return "*";
  return "";
}

namespace {

void fill_inference(RegressionResult& res, double df)
{
  const auto k = res.beta.size();
  res.df = df;
  res.se.resize(k);
  res.t.resize(k);
  res.p.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    double var = res.covariance.matrix(j, j);
    res.se(j) = std::sqrt(std::max(var, 0.0));
    if (res.se(j) > 0 && df > 0) {
      res.t(j) = res.beta(j) / res.se(j);
      res.p(j) = stats::t_two_sided_p(res.t(j), df);
    } else {
      res.t(j) = std::numeric_limits<double>::quiet_NaN();
      res.p(j) = std::numeric_limits<double>::quiet_NaN();
    }
  }
}

} // namespace

CovarianceEstimate clustered_covariance(const RegressionResult& result, const PanelDataset& panel,
                                        CovarianceMode mode)
{
  const auto n = static_cast<std::size_t>(panel.X.rows());
  const auto k = static_cast<std::size_t>(panel.X.cols());
  Eigen::MatrixXd Xd = within_transform(panel.X, panel.entity, panel.entities.size());
  const auto& e = result.residuals;
  CovarianceEstimate out;
  std::vector<std::size_t> singletons(n);
  std::iota(singletons.begin(), singletons.end(), 0);

  switch (mode) {
  case CovarianceMode::classical: {
    double dof = static_cast<double>(n) - static_cast<double>(panel.entities.size()) - static_cast<double>(k);
    if (dof <= 0)
      throw Error(Errc::too_few_observations, "no residual degrees of freedom");
    double s2 = e.squaredNorm() / dof;
    out.matrix = s2 * (Xd.transpose() * Xd).ldlt().solve(Eigen::MatrixXd::Identity(Xd.cols(), Xd.cols()));
    break;
  }
  case CovarianceMode::hc:
    out.matrix = hc0_covariance(Xd, e);
    break;
  case CovarianceMode::by_entity:
    out.matrix = sandwich_covariance(Xd, e, panel.entity, true);
    out.clusters = panel.entities.size();
    break;
  case CovarianceMode::by_time:
    out.matrix = sandwich_covariance(Xd, e, panel.time, true);
    out.clusters = std::set<std::size_t>(panel.time.begin(), panel.time.end()).size();
    break;
  case CovarianceMode::two_way: {
    out.matrix = sandwich_covariance(Xd, e, panel.entity, true) + sandwich_covariance(Xd, e, panel.time, true) -
                 sandwich_covariance(Xd, e, singletons, true);
    out.clusters = std::min(panel.entities.size(), std::set<std::size_t>(panel.time.begin(), panel.time.end()).size());
    break;
  }
  }
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose());
  if (repair_psd(out.matrix))
    ++out.psd_repairs;
  return out;
}

RegressionResult fit_fixed_effects(const PanelDataset& panel, CovarianceMode mode)
{
  const auto n = static_cast<std::size_t>(panel.X.rows());
  const auto k = static_cast<std::size_t>(panel.X.cols());
  const std::size_t n_ent = panel.entities.size();
  if (static_cast<std::size_t>(panel.y.size()) != n || panel.entity.size() != n || panel.time.size() != n ||
      panel.columns.size() != k)
    throw Error(Errc::dimension_mismatch, "panel arrays differ in length");
  if (n < n_ent + k + 1)
    throw Error(Errc::too_few_observations, std::to_string(n) + " observations for " + std::to_string(n_ent) +
                                                " entities and " + std::to_string(k) + " regressors");

  Eigen::MatrixXd Xd = within_transform(panel.X, panel.entity, n_ent);
  Eigen::VectorXd yd = within_transform(panel.y, panel.entity, n_ent);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xd);
  // relative threshold scaled by the largest column norm
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) < k) {
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (auto j = qr.rank(); j < static_cast<Eigen::Index>(k); ++j) {
      if (!names.empty())
        names += ", ";
      names += panel.columns[static_cast<std::size_t>(perm(j))];
    }
    throw Error(Errc::rank_deficient, "collinear after within transform: " + names);
  }

  RegressionResult res;
  res.columns = panel.columns;
  res.entities = panel.entities;
  res.n = n;
  res.beta = qr.solve(yd);
  res.residuals = yd - Xd * res.beta;

  Eigen::MatrixXd xsum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_ent), static_cast<Eigen::Index>(k));
  std::vector<double> ysum(n_ent, 0.0);
  res.entity_counts.assign(n_ent, 0);
  for (std::size_t r = 0; r < n; ++r) {
    auto e = panel.entity[r];
    xsum.row(static_cast<Eigen::Index>(e)) += panel.X.row(static_cast<Eigen::Index>(r));
    ysum[e] += panel.y(static_cast<Eigen::Index>(r));
    ++res.entity_counts[e];
  }
  std::vector<double> c(n_ent);
  for (std::size_t e = 0; e < n_ent; ++e) {
    auto cnt = static_cast<double>(res.entity_counts[e]);
    c[e] = ysum[e] / cnt - xsum.row(static_cast<Eigen::Index>(e)).dot(res.beta) / cnt;
  }
  res.alpha = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(n_ent);
  res.gamma.resize(n_ent);
  for (std::size_t e = 0; e < n_ent; ++e)
    res.gamma[e] = c[e] - res.alpha;

  res.mode = mode;
  res.covariance = clustered_covariance(res, panel, mode);
  double df = res.covariance.clusters > 0
                  ? static_cast<double>(res.covariance.clusters) - 1.0
                  : static_cast<double>(n) - static_cast<double>(n_ent) - static_cast<double>(k);
  fill_inference(res, df);
  return res;
}

std::map<std::string, std::string> read_sectors_csv(const std::filesystem::path& path)
{
  if (!std::filesystem::exists(path))
    throw Error(Errc::missing_input, "sector file not found: " + path.string());
  auto table = io::read_csv(path);
  auto c_sym = table.column("symbol"), c_sec = table.column("sector");
  std::map<std::string, std::string> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() < table.header.size())
      throw Error(Errc::malformed_record, path.string() + ":" + std::to_string(table.line_numbers[r]) +
                                              ": too few columns");
    out[io::to_upper(io::trim(row[c_sym]))] = std::string(io::trim(row[c_sec]));
  }
  return out;
}

} // namespace newsflow::panel
