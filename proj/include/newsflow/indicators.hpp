#pragma once

#include "newsflow/corpus.hpp"
#include "newsflow/sentiment.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

/// Daily stock-reaction indicators: range-based log volatility, detrended
/// log volume, log returns, and news attention ratios.
namespace newsflow::indicators {

struct MarketBar {
  std::string symbol;
  std::size_t day = 0;
  double open = 0, high = 0, low = 0, close = 0;
  double volume = 0;
};

/// Throws Error(invalid_value) unless prices are positive and
/// low <= min(open, close) <= max(open, close) <= high, volume >= 0.
void validate_bar(const MarketBar& bar);

/// Garman-Klass variance of one bar.
double garman_klass_variance(const MarketBar& bar);

/// log sigma = 0.5 * log(variance); nullopt when the variance is not positive.
std::optional<double> garman_klass_log_vol(const MarketBar& bar);

/// Throws Error(missing_previous) when `close_prev` is absent.
double log_return(double close_t, std::optional<double> close_prev);

inline constexpr std::size_t detrend_window = 120;

struct DetrendModel {
  std::size_t t0 = 0; ///< ordinal of the first window observation
  double alpha = 0, beta1 = 0, beta2 = 0;
  std::size_t window = detrend_window;

  double predict(std::size_t s) const
  {
    double x = static_cast<double>(s) - static_cast<double>(t0);
    return alpha + beta1 * x + beta2 * x * x;
  }
};

/// Quadratic trend fitted by least squares on the last `window` non-missing
/// values of `raw` strictly before day t. Throws Error(insufficient_history)
/// or Error(singular_fit).
DetrendModel fit_detrend(std::span<const std::optional<double>> raw, std::size_t t,
                         std::size_t window = detrend_window);

/// V_t = V*_t - forecast. `raw[s]` is log volume on day s (nullopt when
/// missing); only entries before t feed the fit. Throws
/// Error(insufficient_history), Error(invalid_value) when V*_t is missing,
/// or Error(singular_fit).
double detrended_volume(std::span<const std::optional<double>> raw, std::size_t t,
                        std::size_t window = detrend_window);

struct IndicatorPoint {
  std::string symbol;
  std::size_t day = 0;
  std::optional<double> log_vol;
  std::optional<double> detrended_volume;
  std::optional<double> ret;
  std::optional<double> close;
};

struct IndicatorStats {
  std::size_t degenerate_bars = 0;
  std::size_t zero_volume = 0;
};

/// One point per calendar day for one symbol. `bars` may be in any order
/// and may skip days; at most one bar per day.
std::vector<IndicatorPoint> compute_indicators(std::span<const MarketBar> bars, std::size_t n_days,
                                               std::size_t window = detrend_window,
                                               IndicatorStats* stats = nullptr);

/// Bars grouped by upper-case symbol; dates are mapped onto the calendar.
/// Rows with dates outside the calendar are an error (calendar_mismatch).
std::map<std::string, std::vector<MarketBar>> read_prices_csv(const std::filesystem::path& path,
                                                              const corpus::TradingCalendar& calendar);

/// CSV: symbol,date,log_vol,detrended_volume,ret with empty missing cells.
std::string format_indicator_csv(const std::map<std::string, std::vector<IndicatorPoint>>& points,
                                 const corpus::TradingCalendar& calendar);
std::map<std::string, std::vector<IndicatorPoint>> read_indicator_csv(const std::filesystem::path& path,
                                                                      const corpus::TradingCalendar& calendar);

/// Market-wide regressors per day.
struct MarketSeries {
  std::vector<std::optional<double>> market_return;
  std::vector<std::optional<double>> vix;
};

/// CSV: date,market_return,vix
std::string format_market_csv(const MarketSeries& market, const corpus::TradingCalendar& calendar);
MarketSeries read_market_csv(const std::filesystem::path& path, const corpus::TradingCalendar& calendar);

/// Days with I=1 divided by total_days.
double attention_ratio(std::span<const sentiment::SentimentRecord> records, std::size_t total_days);

enum class AttentionGroup { low, median, high, extremely_high };
std::string_view to_string(AttentionGroup g) noexcept;

/// Split at the 25/50/75% quantiles (linear interpolation):
/// (-inf,q25) low, [q25,q50) median, [q50,q75) high, [q75,inf) extremely_high.
/// Throws Error(invalid_value) for fewer than four symbols.
std::map<std::string, AttentionGroup> attention_groups(const std::map<std::string, double>& ratios);

} // namespace newsflow::indicators
