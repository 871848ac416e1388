#include "newsflow/indicators.hpp"

#include "newsflow/error.hpp"
#include "newsflow/stats.hpp"
#include "newsflow/text_io.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace newsflow::indicators {

void validate_bar(const MarketBar& bar)
{
  auto where = bar.symbol + " day " + std::to_string(bar.day);
  if (!(bar.open > 0 && bar.high > 0 && bar.low > 0 && bar.close > 0))
    throw Error(Errc::invalid_value, where + ": prices must be positive");
  if (!(bar.low <= std::min(bar.open, bar.close) && std::max(bar.open, bar.close) <= bar.high))
    throw Error(Errc::invalid_value, where + ": inconsistent high/low");
  if (!(bar.volume >= 0) || !std::isfinite(bar.volume))
    throw Error(Errc::invalid_value, where + ": negative volume");
}

double garman_klass_variance(const MarketBar& bar)
{
  double lo = std::log(bar.open);
  double u = std::log(bar.high) - lo;
  double d = std::log(bar.low) - lo;
  double c = std::log(bar.close) - lo;
  return 0.511 * (u - d) * (u - d) - 0.019 * (c * (u + d) - 2.0 * u * d) - 0.383 * c * c;
}

std::optional<double> garman_klass_log_vol(const MarketBar& bar)
{
  double v = garman_klass_variance(bar);
  if (!(v > 0))
    return std::nullopt;
  return 0.5 * std::log(v);
}

double log_return(double close_t, std::optional<double> close_prev)
{
  if (!close_prev)
    throw Error(Errc::missing_previous, "no previous close");
  if (!(close_t > 0 && *close_prev > 0))
    throw Error(Errc::invalid_value, "closes must be positive");
  return std::log(close_t) - std::log(*close_prev);
}

DetrendModel fit_detrend(std::span<const std::optional<double>> raw, std::size_t t, std::size_t window)
{
  if (window < 3)
    throw Error(Errc::invalid_value, "detrend window must be at least 3");
  std::vector<std::size_t> days;
  for (std::size_t s = std::min(t, raw.size()); s-- > 0 && days.size() < window;)
    if (raw[s])
      days.push_back(s);
  if (days.size() < window)
    throw Error(Errc::insufficient_history, "need " + std::to_string(window) + " observations before day " +
                                                std::to_string(t) + ", have " + std::to_string(days.size()));
  std::reverse(days.begin(), days.end());

  DetrendModel model;
  model.t0 = days.front();
  model.window = window;
  // x is scaled by the window length for conditioning
  const double scale = static_cast<double>(window);
  Eigen::MatrixXd X(window, 3);
  Eigen::VectorXd y(window);
  for (std::size_t k = 0; k < window; ++k) {
    double x = static_cast<double>(days[k] - model.t0) / scale;
    X(k, 0) = 1.0;
    X(k, 1) = x;
    X(k, 2) = x * x;
    y(k) = *raw[days[k]];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < 3)
    throw Error(Errc::singular_fit, "collinear trend design");
  Eigen::Vector3d b = qr.solve(y);
  model.alpha = b(0);
  model.beta1 = b(1) / scale;
  model.beta2 = b(2) / (scale * scale);
  return model;
}

double detrended_volume(std::span<const std::optional<double>> raw, std::size_t t, std::size_t window)
{
  if (t >= raw.size() || !raw[t])
    throw Error(Errc::invalid_value, "log volume missing at day " + std::to_string(t));
  auto model = fit_detrend(raw, t, window);
  // evaluate in scaled coordinates to match the fit
  const double scale = static_cast<double>(model.window);
  double x = (static_cast<double>(t) - static_cast<double>(model.t0)) / scale;
  double b1 = model.beta1 * scale, b2 = model.beta2 * scale * scale;
  return *raw[t] - (model.alpha + b1 * x + b2 * x * x);
}

std::vector<IndicatorPoint> compute_indicators(std::span<const MarketBar> bars, std::size_t n_days,
                                               std::size_t window, IndicatorStats* stats)
{
  std::vector<const MarketBar*> by_day(n_days, nullptr);
  std::string symbol;
  for (const auto& bar : bars) {
    if (bar.day >= n_days)
      throw Error(Errc::calendar_mismatch, bar.symbol + ": bar outside the calendar");
    if (by_day[bar.day])
      throw Error(Errc::duplicate_id, bar.symbol + ": two bars on day " + std::to_string(bar.day));
    validate_bar(bar);
    by_day[bar.day] = &bar;
    symbol = bar.symbol;
  }

  IndicatorStats local;
  std::vector<std::optional<double>> raw(n_days);
  std::vector<IndicatorPoint> out(n_days);
  for (std::size_t t = 0; t < n_days; ++t) {
    out[t].symbol = symbol;
    out[t].day = t;
    const auto* bar = by_day[t];
    if (!bar)
      continue;
    out[t].close = bar->close;
    out[t].log_vol = garman_klass_log_vol(*bar);
    if (!out[t].log_vol)
      ++local.degenerate_bars;
    if (bar->volume > 0)
      raw[t] = std::log(bar->volume);
    else
      ++local.zero_volume;
    // previous close is the previous trading day's
    if (t > 0 && by_day[t - 1])
      out[t].ret = log_return(bar->close, by_day[t - 1]->close);
  }
  std::size_t seen = 0;
  for (std::size_t t = 0; t < n_days; ++t) {
    if (raw[t] && seen >= window)
      out[t].detrended_volume = detrended_volume(raw, t, window);
    if (raw[t])
      ++seen;
  }
  if (stats) {
    stats->degenerate_bars += local.degenerate_bars;
    stats->zero_volume += local.zero_volume;
  }
  return out;
}

std::map<std::string, std::vector<MarketBar>> read_prices_csv(const std::filesystem::path& path,
                                                              const corpus::TradingCalendar& calendar)
{
  if (!std::filesystem::exists(path))
    throw Error(Errc::missing_input, "price file not found: " + path.string());
  auto table = io::read_csv(path);
  std::size_t c_sym = table.column("symbol"), c_date = table.column("date"), c_o = table.column("open"),
              c_h = table.column("high"), c_l = table.column("low"), c_c = table.column("close"),
              c_v = table.column("volume");
  std::map<std::string, std::vector<MarketBar>> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    if (row.size() < table.header.size())
      throw Error(Errc::price_parse_error, where + ": too few columns");
    auto date = corpus::parse_date(row[c_date]);
    if (!date)
      throw Error(Errc::price_parse_error, where + ": bad date '" + row[c_date] + "'");
    auto day = calendar.index_of(*date);
    if (!day)
      throw Error(Errc::calendar_mismatch, where + ": " + row[c_date] + " is not a trading day");
    MarketBar bar;
    bar.symbol = io::to_upper(io::trim(row[c_sym]));
    bar.day = *day;
    auto field = [&](std::size_t c, const char* name) {
      auto v = io::parse_double(row[c]);
      if (!v)
        throw Error(Errc::price_parse_error, where + ": bad " + name + " '" + row[c] + "'");
      return *v;
    };
    bar.open = field(c_o, "open");
    bar.high = field(c_h, "high");
    bar.low = field(c_l, "low");
    bar.close = field(c_c, "close");
    bar.volume = field(c_v, "volume");
    try {
      validate_bar(bar);
    } catch (const Error& e) {
      throw Error(Errc::price_parse_error, where + ": " + e.what());
    }
    out[bar.symbol].push_back(bar);
  }
  for (auto& [sym, bars] : out)
    std::sort(bars.begin(), bars.end(), [](const MarketBar& a, const MarketBar& b) { return a.day < b.day; });
  return out;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); }

std::optional<double> parse_cell(const std::string& s, const std::string& where)
{
  if (io::trim(s).empty())
    return std::nullopt;
  auto v = io::parse_double(s);
  if (!v)
    throw Error(Errc::malformed_record, where + ": bad number '" + s + "'");
  return v;
}

} // namespace

std::string format_indicator_csv(const std::map<std::string, std::vector<IndicatorPoint>>& points,
                                 const corpus::TradingCalendar& calendar)
{
  std::string out = "symbol,date,log_vol,detrended_volume,ret\n";
  for (const auto& [sym, series] : points) {
    for (const auto& p : series) {
      if (!p.log_vol && !p.detrended_volume && !p.ret && !p.close)
        continue;
      out += io::csv_escape(sym) + ',' + corpus::format_date(calendar.day(p.day)) + ',' + cell(p.log_vol) + ',' +
             cell(p.detrended_volume) + ',' + cell(p.ret) + '\n';
    }
  }
  return out;
}

std::map<std::string, std::vector<IndicatorPoint>> read_indicator_csv(const std::filesystem::path& path,
                                                                      const corpus::TradingCalendar& calendar)
{
  if (!std::filesystem::exists(path))
    throw Error(Errc::missing_input, "indicator file not found: " + path.string());
  auto table = io::read_csv(path);
  std::size_t c_sym = table.column("symbol"), c_date = table.column("date"), c_lv = table.column("log_vol"),
              c_dv = table.column("detrended_volume"), c_r = table.column("ret");
  std::map<std::string, std::vector<IndicatorPoint>> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    if (row.size() < table.header.size())
      throw Error(Errc::malformed_record, where + ": too few columns");
    auto date = corpus::parse_date(row[c_date]);
    if (!date)
      throw Error(Errc::malformed_record, where + ": bad date");
    auto day = calendar.index_of(*date);
    if (!day)
      throw Error(Errc::calendar_mismatch, where + ": date not in trading calendar");
    auto sym = io::to_upper(row[c_sym]);
    auto& series = out[sym];
    if (series.empty()) {
      series.resize(calendar.size());
      for (std::size_t t = 0; t < series.size(); ++t) {
        series[t].symbol = sym;
        series[t].day = t;
      }
    }
    auto& p = series[*day];
    p.log_vol = parse_cell(row[c_lv], where);
    p.detrended_volume = parse_cell(row[c_dv], where);
    p.ret = parse_cell(row[c_r], where);
  }
  return out;
}

std::string format_market_csv(const MarketSeries& market, const corpus::TradingCalendar& calendar)
{
  std::string out = "date,market_return,vix\n";
  for (std::size_t t = 0; t < calendar.size(); ++t) {
    auto r = t < market.market_return.size() ? market.market_return[t] : std::nullopt;
    auto v = t < market.vix.size() ? market.vix[t] : std::nullopt;
    out += corpus::format_date(calendar.day(t)) + ',' + cell(r) + ',' + cell(v) + '\n';
  }
  return out;
}

MarketSeries read_market_csv(const std::filesystem::path& path, const corpus::TradingCalendar& calendar)
{
  if (!std::filesystem::exists(path))
    throw Error(Errc::missing_input, "market file not found: " + path.string());
  auto table = io::read_csv(path);
  std::size_t c_date = table.column("date"), c_r = table.column("market_return"), c_v = table.column("vix");
  MarketSeries out;
  out.market_return.resize(calendar.size());
  out.vix.resize(calendar.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    if (row.size() < table.header.size())
      throw Error(Errc::malformed_record, where + ": too few columns");
    auto date = corpus::parse_date(row[c_date]);
    auto day = date ? calendar.index_of(*date) : std::nullopt;
    if (!day)
      throw Error(Errc::calendar_mismatch, where + ": date not in trading calendar");
    out.market_return[*day] = parse_cell(row[c_r], where);
    out.vix[*day] = parse_cell(row[c_v], where);
  }
  return out;
}

double attention_ratio(std::span<const sentiment::SentimentRecord> records, std::size_t total_days)
{
  if (total_days == 0)
    throw Error(Errc::invalid_value, "total_days must be at least 1");
  std::size_t active = 0;
  for (const auto& r : records)
    active += r.active;
  return static_cast<double>(active) / static_cast<double>(total_days);
}

std::string_view to_string(AttentionGroup g) noexcept
{
  switch (g) {
  case AttentionGroup::low:
    return "low";
  case AttentionGroup::median:
    return "median";
  case AttentionGroup::high:
    return "high";
  case AttentionGroup::extremely_high:
    return "extremely_high";
  }
  return "?";
}

std::map<std::string, AttentionGroup> attention_groups(const std::map<std::string, double>& ratios)
{
  if (ratios.size() < 4)
    throw Error(Errc::invalid_value, "attention groups need at least 4 symbols");
  std::vector<double> values;
  for (const auto& [sym, r] : ratios)
    values.push_back(r);
  std::sort(values.begin(), values.end());
  double q25 = stats::quantile_sorted(values, 0.25);
  double q50 = stats::quantile_sorted(values, 0.50);
  double q75 = stats::quantile_sorted(values, 0.75);
  std::map<std::string, AttentionGroup> out;
  for (const auto& [sym, r] : ratios) {
    AttentionGroup g = AttentionGroup::low;
    if (r >= q75)
      g = AttentionGroup::extremely_high;
    else if (r >= q50)
      g = AttentionGroup::high;
    else if (r >= q25)
      g = AttentionGroup::median;
    out[sym] = g;
  }
  return out;
}

} // namespace newsflow::indicators
