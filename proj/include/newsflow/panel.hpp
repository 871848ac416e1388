#pragma once

#include "newsflow/error.hpp"
#include "newsflow/indicators.hpp"
#include "newsflow/sentiment.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

/// Fixed-effects panel regressions of stock reactions on news sentiment.
namespace newsflow::panel {

enum class Dependent { log_vol, volume, ret };
std::string_view to_string(Dependent d) noexcept;
std::optional<Dependent> parse_dependent(std::string_view name);

enum class CovarianceMode { classical, hc, by_entity, by_time, two_way };
std::string_view to_string(CovarianceMode m) noexcept;
std::optional<CovarianceMode> parse_covariance_mode(std::string_view name);

/// Sentiment records of one projection, per symbol, indexed by day.
using SymbolSeries = std::map<std::string, std::vector<sentiment::SentimentRecord>>;
using IndicatorMap = std::map<std::string, std::vector<indicators::IndicatorPoint>>;

/// Regroups distill output (symbol-major) into per-symbol day vectors of
/// length n_days. Missing days become inactive records.
SymbolSeries by_symbol(std::span<const sentiment::SentimentRecord> records, std::size_t n_days);

struct PanelSpec {
  Dependent dependent = Dependent::log_vol;
  std::size_t h = 1;
  bool cumulative = false;
  std::string projection;                     ///< lexicon name or "PCA"
  std::optional<std::set<std::string>> subsample; ///< symbols kept; nullopt keeps all
  std::string subsample_name = "all";

  /// e.g. "all/log_vol/BL/h1" or "all/ret/LM/h3c"
  std::string id() const;
};

/// Regressor order of every panel.
const std::vector<std::string>& regressor_names();

struct PanelDataset {
  PanelSpec spec;
  std::vector<std::string> columns;
  Eigen::MatrixXd X;                ///< n x K, no intercept
  Eigen::VectorXd y;
  std::vector<std::size_t> entity;  ///< index into `entities`
  std::vector<std::size_t> time;    ///< day t of the regressors
  std::vector<std::string> entities;
  std::size_t dropped_missing = 0;  ///< observations with a missing field
  std::size_t dropped_entities = 0; ///< entities with fewer than two observations
};

/// The dependent is dated t+h. Regressors: I, Pos, Neg dated t (or pooled
/// over t..t+h-1 when cumulative), then R_M, VIX, log sigma, V and R dated t.
/// Throws Error(empty_panel), Error(calendar_mismatch) or Error(invalid_value)
/// for h outside 1..5.
PanelDataset assemble_panel(const SymbolSeries& sentiment, const IndicatorMap& indicators,
                            const indicators::MarketSeries& market, const PanelSpec& spec);

/// Subtracts entity means from each column.
Eigen::MatrixXd within_transform(const Eigen::MatrixXd& m, std::span<const std::size_t> entity,
                                 std::size_t n_entities);

struct CovarianceEstimate {
  Eigen::MatrixXd matrix;
  std::size_t clusters = 0; ///< G used for degrees of freedom (0 for classical / hc)
  std::size_t psd_repairs = 0;
};

struct RegressionResult {
  std::vector<std::string> columns;
  std::vector<std::string> entities;
  Eigen::VectorXd beta;
  double alpha = 0;
  std::vector<double> gamma; ///< per entity, sums to zero
  Eigen::VectorXd residuals;
  std::vector<std::size_t> entity_counts;
  std::size_t n = 0;

  CovarianceMode mode = CovarianceMode::two_way;
  CovarianceEstimate covariance;
  double df = 0;
  Eigen::VectorXd se, t, p;
};

/// Within estimator with grand-mean intercept and zero-sum fixed effects.
/// Throws Error(too_few_observations) or Error(rank_deficient) naming the
/// dropped columns.
RegressionResult fit_fixed_effects(const PanelDataset& panel, CovarianceMode mode = CovarianceMode::two_way);

/// Covariance of the slopes for a fitted panel. Throws Error(single_cluster).
CovarianceEstimate clustered_covariance(const RegressionResult& result, const PanelDataset& panel,
                                        CovarianceMode mode);

/// (X'X)^-1 (sum_g s_g s_g') (X'X)^-1 with s_g = sum over cluster g of x_i e_i.
/// With `small_sample` the result is scaled by G/(G-1) * (N-1)/(N-K), K = X.cols().
Eigen::MatrixXd sandwich_covariance(const Eigen::MatrixXd& X, const Eigen::VectorXd& e,
                                    std::span<const std::size_t> cluster, bool small_sample);

/// White HC0: (X'X)^-1 (sum x_i x_i' e_i^2) (X'X)^-1.
Eigen::MatrixXd hc0_covariance(const Eigen::MatrixXd& X, const Eigen::VectorXd& e);

/// Raises eigenvalues below zero to zero. Returns true if anything changed.
bool repair_psd(Eigen::MatrixXd& m);

/// "***" for p < 0.01, "**" for p < 0.05, "*" for p < 0.1, else "".
std::string stars(double p);

struct SentimentIndex {
  Eigen::VectorXd loadings; ///< unit norm, sum > 0
  Eigen::VectorXd eigenvalues; ///< descending
  double explained_share = 0;
  Eigen::VectorXd means;
  Eigen::VectorXd sds;
  /// Projection sum_k w_k x_k / sd_k (not centered, so an all-zero row
  /// scores zero).
  double score(std::span<const double> row) const;
};

/// First principal component of the column-standardized matrix (rows are
/// observations). Throws Error(too_few_observations) or Error(constant_column).
SentimentIndex pca_sentiment_index(const Eigen::MatrixXd& m);

struct PcaProjection {
  SymbolSeries series; ///< lexicon_name "PCA"
  SentimentIndex pos;
  SentimentIndex neg;
};

/// Fits positive and negative indices on active symbol-days across all the
/// given lexica (in map order) and projects every record.
PcaProjection build_pca_series(const std::map<std::string, SymbolSeries>& by_lexicon);

enum class Suite { entire, lags_noncumulative, lags_cumulative, attention, sector };
std::string_view to_string(Suite s) noexcept;
std::optional<Suite> parse_suite(std::string_view name);

struct SuiteData {
  std::map<std::string, SymbolSeries> sentiment; ///< by lexicon name
  IndicatorMap indicators;
  indicators::MarketSeries market;
  std::map<std::string, std::string> sectors; ///< symbol -> sector, for the sector suite
  bool include_pca = true;
};

struct SuiteCell {
  PanelSpec spec;
  std::optional<RegressionResult> result;
  std::size_t dropped_missing = 0;
  std::optional<Errc> error;
  std::string message;
};

/// Specifications of a suite in output order.
std::vector<PanelSpec> suite_specs(const SuiteData& data, Suite suite);

/// Fits every cell; a failing cell records its error instead of aborting
/// the suite. Results do not depend on `threads`.
std::vector<SuiteCell> run_specification_suite(const SuiteData& data, Suite suite,
                                               CovarianceMode mode = CovarianceMode::two_way,
                                               std::size_t threads = 1);

/// CSV: spec_id,variable,estimate,se,p,stars
std::string format_results_csv(std::span<const SuiteCell> cells);
/// Fixed-width tables, one block per (subsample, lag, dependent).
std::string format_results_table(std::span<const SuiteCell> cells);
/// Coefficients and residuals of each cell, read back by the simulator.
std::string format_fits_json(std::span<const SuiteCell> cells);

std::map<std::string, std::string> read_sectors_csv(const std::filesystem::path& path);

} // namespace newsflow::panel
