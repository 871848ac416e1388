#include "newsflow/pipeline.hpp"

#include "newsflow/error.hpp"
#include "newsflow/indicators.hpp"
#include "newsflow/simulate.hpp"
#include "newsflow/stats.hpp"
#include "newsflow/svg.hpp"
#include "newsflow/text_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <thread>

namespace newsflow::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void require_file(const fs::path& path, const std::string& what)
{
  if (path.empty())
    throw Error(Errc::config_error, what + " path is not configured");
  if (!fs::exists(path))
    throw Error(Errc::missing_input, what + " not found: " + path.string());
}

std::string checksum(const fs::path& path)
{
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path))
      if (e.is_regular_file())
        files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string combined;
    for (const auto& f : files)
      combined += fs::relative(f, path).generic_string() + ":" + io::hex64(io::fnv1a(io::read_file(f))) + "\n";
    return io::hex64(io::fnv1a(combined));
  }
  return io::hex64(io::fnv1a(io::read_file(path)));
}

class Outputs {
public:
  Outputs(const RunConfig& config, std::string command) : config_(config), command_(std::move(command))
  {
    fs::create_directories(config.output_dir);
  }

  void write(const std::string& name, const std::string& content)
  {
    io::write_file_atomic(config_.output_dir / name, content);
    report.outputs.push_back(name);
  }

  void input(const std::string& label, const fs::path& path)
  {
    if (!path.empty() && fs::exists(path))
      inputs_.emplace_back(label, checksum(path));
  }

  /// Records this command in run_manifest.json, keeping other commands' entries.
  void finish()
  {
    auto path = config_.output_dir / "run_manifest.json";
    ordered_json manifest = ordered_json::object();
    if (fs::exists(path)) {
      try {
        manifest = ordered_json::parse(io::read_file(path));
      } catch (const nlohmann::json::exception&) {
        manifest = ordered_json::object();
      }
    }
    ordered_json entry;
    entry["config_hash"] = io::hex64(io::fnv1a(canonical_config(config_)));
    ordered_json in = ordered_json::object();
    for (const auto& [label, sum] : inputs_)
      in[label] = sum;
    entry["inputs"] = in;
    ordered_json out = ordered_json::object();
    for (const auto& name : report.outputs)
      out[name] = checksum(config_.output_dir / name);
    entry["outputs"] = out;
    manifest[command_] = entry;
    io::write_file_atomic(path, manifest.dump(2) + "\n");
  }

  CommandReport report;

private:
  const RunConfig& config_;
  std::string command_;
  std::vector<std::pair<std::string, std::string>> inputs_;
};

corpus::TradingCalendar load_calendar(const RunConfig& config)
{
  require_file(config.calendar, "trading calendar");
  auto cal = corpus::TradingCalendar::load(config.calendar);
  if (cal.empty())
    throw Error(Errc::invalid_value, "trading calendar is empty");
  return cal;
}

corpus::ArticleSet load_corpus(const RunConfig& config, const corpus::TradingCalendar& cal)
{
  require_file(config.corpus, "corpus");
  auto set = corpus::load_articles(config.corpus, config.corpus_format);
  set = corpus::assign_trading_days(set, cal, corpus::DayBoundary{std::chrono::minutes(config.utc_shift_minutes)});
  if (!config.symbols.empty())
    set = corpus::filter_by_symbols(set, std::set<std::string>(config.symbols.begin(), config.symbols.end()));
  return set;
}

std::string fixed(double v, int prec)
{
  if (std::isnan(v))
    return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

fs::path out_file(const RunConfig& config, const char* name) { return config.output_dir / name; }

} // namespace

std::vector<lexicon::Lexicon> load_lexica(const RunConfig& config)
{
  if (config.lexica.empty())
    throw Error(Errc::config_error, "no lexicon configured");
  std::vector<lexicon::Lexicon> out;
  for (const auto& src : config.lexica) {
    std::vector<lexicon::LexiconEntry> entries;
    if (src.format == LexiconSource::Format::mpqa) {
      entries = lexicon::load_mpqa(src.path);
    } else {
      entries = lexicon::load_wordlist(src.positive, lexicon::Polarity::positive);
      auto neg = lexicon::load_wordlist(src.negative, lexicon::Polarity::negative);
      entries.insert(entries.end(), neg.begin(), neg.end());
    }
    out.push_back(lexicon::build_lexicon(src.name, std::move(entries)));
  }
  return out;
}

CommandReport cmd_distill(const RunConfig& config)
{
  validate(config);
  auto cal = load_calendar(config);
  auto lexica = load_lexica(config);
  auto set = load_corpus(config, cal);

  std::vector<std::string> symbols = config.symbols;
  if (symbols.empty()) {
    std::set<std::string> seen;
    for (const auto& a : set.articles)
      for (const auto& s : a.symbols)
        seen.insert(io::to_upper(s));
    symbols.assign(seen.begin(), seen.end());
  }
  auto result = sentiment::distill(set, lexica, symbols, cal.size(), config.negation,
                                   sentiment::MatchOptions{config.match_policy, nullptr},
                                   effective_threads(config.threads));

  Outputs out(config, "distill");
  out.input("corpus", config.corpus);
  out.input("calendar", config.calendar);
  for (const auto& src : config.lexica) {
    out.input("lexicon_" + src.name, src.format == LexiconSource::Format::mpqa ? src.path : src.positive);
    if (src.format == LexiconSource::Format::wordlist)
      out.input("lexicon_" + src.name + "_negative", src.negative);
  }
  out.write("sentiment.csv", sentiment::format_sentiment_csv(result.records, cal));

  std::string scores = "article_id,lexicon,pos_count,neg_count,word_count,pos_prop,neg_prop,class\n";
  for (const auto& [name, list] : result.scores)
    for (const auto& s : list)
      scores += io::csv_escape(s.article_id) + ',' + io::csv_escape(name) + ',' + std::to_string(s.pos_count) + ',' +
                std::to_string(s.neg_count) + ',' + std::to_string(s.word_count) + ',' +
                io::format_double(s.pos_prop) + ',' + io::format_double(s.neg_prop) + ',' +
                std::string(lexicon::to_string(sentiment::classify_article(s))) + '\n';
  out.write("article_scores.csv", scores);

  std::size_t rows = 0;
  for (const auto& [name, recs] : result.records)
    rows += recs.size();
  out.report.summary.push_back("articles: " + std::to_string(set.articles.size()));
  out.report.summary.push_back("unassigned articles: " + std::to_string(set.unassigned));
  out.report.summary.push_back("articles without words: " + std::to_string(result.skipped));
  out.report.summary.push_back("symbols: " + std::to_string(symbols.size()) + ", lexica: " +
                               std::to_string(lexica.size()) + ", sentiment rows: " + std::to_string(rows));
  if (result.skipped > 0)
    out.report.warnings.push_back(std::to_string(result.skipped) + " articles had no word tokens and were skipped");
  out.finish();
  return out.report;
}

CommandReport cmd_indicators(const RunConfig& config)
{
  validate(config);
  auto cal = load_calendar(config);
  require_file(config.prices, "price file");
  auto bars = indicators::read_prices_csv(config.prices, cal);

  indicators::MarketSeries market;
  market.market_return.resize(cal.size());
  market.vix.resize(cal.size());
  auto mkt = bars.find(config.market_symbol);
  if (mkt == bars.end())
    throw Error(Errc::missing_input, "market symbol " + config.market_symbol + " not in the price file");
  auto vix = bars.find(config.vix_symbol);
  if (vix == bars.end())
    throw Error(Errc::missing_input, "volatility index symbol " + config.vix_symbol + " not in the price file");
  {
    std::vector<std::optional<double>> close(cal.size());
    for (const auto& b : mkt->second)
      close[b.day] = b.close;
    for (std::size_t t = 1; t < cal.size(); ++t)
      if (close[t] && close[t - 1])
        market.market_return[t] = indicators::log_return(*close[t], close[t - 1]);
    for (const auto& b : vix->second)
      market.vix[b.day] = b.close;
  }

  std::vector<std::string> symbols;
  for (const auto& [sym, list] : bars)
    if (sym != config.market_symbol && sym != config.vix_symbol &&
        (config.symbols.empty() || std::find(config.symbols.begin(), config.symbols.end(), sym) != config.symbols.end()))
      symbols.push_back(sym);

  std::vector<std::vector<indicators::IndicatorPoint>> series(symbols.size());
  std::vector<indicators::IndicatorStats> stats(symbols.size());
  std::vector<std::optional<Error>> failures(symbols.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < symbols.size(); i += stride) {
      try {
        series[i] = indicators::compute_indicators(bars.at(symbols[i]), cal.size(), config.detrend_window, &stats[i]);
      } catch (const Error& e) {
        failures[i] = e;
      }
    }
  };
  std::size_t threads = std::min(effective_threads(config.threads), std::max<std::size_t>(symbols.size(), 1));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back(work, w, threads);
    for (auto& t : pool)
      t.join();
  }
  for (const auto& f : failures)
    if (f)
      throw *f;

  std::map<std::string, std::vector<indicators::IndicatorPoint>> points;
  indicators::IndicatorStats total;
  std::size_t warmup = 0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    total.degenerate_bars += stats[i].degenerate_bars;
    total.zero_volume += stats[i].zero_volume;
    for (const auto& p : series[i])
      if (p.close && !p.detrended_volume)
        ++warmup;
    points[symbols[i]] = std::move(series[i]);
  }

  Outputs out(config, "indicators");
  out.input("prices", config.prices);
  out.input("calendar", config.calendar);
  out.write("indicators.csv", indicators::format_indicator_csv(points, cal));
  out.write("market.csv", indicators::format_market_csv(market, cal));
  out.report.summary.push_back("symbols: " + std::to_string(symbols.size()));
  out.report.summary.push_back("degenerate bars: " + std::to_string(total.degenerate_bars));
  out.report.summary.push_back("zero-volume days: " + std::to_string(total.zero_volume));
  out.report.summary.push_back("days without detrended volume (warm-up or missing): " + std::to_string(warmup));
  if (total.degenerate_bars > 0)
    out.report.warnings.push_back(std::to_string(total.degenerate_bars) +
                                  " bars had non-positive range variance; log volatility left missing");
  out.finish();
  return out.report;
}

namespace {

panel::SuiteData load_suite_data(const RunConfig& config, const corpus::TradingCalendar& cal)
{
  auto sent_path = out_file(config, "sentiment.csv");
  auto ind_path = out_file(config, "indicators.csv");
  auto mkt_path = out_file(config, "market.csv");
  require_file(sent_path, "sentiment file");
  require_file(ind_path, "indicator file");
  require_file(mkt_path, "market file");
  panel::SuiteData data;
  for (const auto& [name, recs] : sentiment::read_sentiment_csv(sent_path, cal))
    data.sentiment[name] = panel::by_symbol(recs, cal.size());
  data.indicators = indicators::read_indicator_csv(ind_path, cal);
  data.market = indicators::read_market_csv(mkt_path, cal);
  data.include_pca = config.include_pca;
  return data;
}

} // namespace

CommandReport cmd_panel(const RunConfig& config)
{
  validate(config);
  auto cal = load_calendar(config);
  auto data = load_suite_data(config, cal);
  bool need_sectors = std::find(config.suites.begin(), config.suites.end(), panel::Suite::sector) != config.suites.end();
  if (need_sectors) {
    require_file(config.sectors, "sector file");
    data.sectors = panel::read_sectors_csv(config.sectors);
  }

  Outputs out(config, "panel");
  out.input("sentiment.csv", out_file(config, "sentiment.csv"));
  out.input("indicators.csv", out_file(config, "indicators.csv"));
  out.input("market.csv", out_file(config, "market.csv"));
  if (need_sectors)
    out.input("sectors", config.sectors);
  for (auto suite : config.suites) {
    auto cells = panel::run_specification_suite(data, suite, config.covariance, effective_threads(config.threads));
    std::string name(panel::to_string(suite));
    out.write("results_" + name + ".csv", panel::format_results_csv(cells));
    out.write("table_" + name + ".txt", panel::format_results_table(cells));
    out.write("fits_" + name + ".json", panel::format_fits_json(cells));
    std::size_t ok = 0;
    for (const auto& c : cells) {
      if (c.result) {
        ++ok;
        if (c.result->covariance.psd_repairs > 0)
          out.report.warnings.push_back(c.spec.id() + ": covariance repaired to be positive semidefinite");
      } else {
        out.report.warnings.push_back(c.spec.id() + ": " + std::string(errc_name(*c.error)) + ": " + c.message);
      }
    }
    out.report.summary.push_back(name + ": " + std::to_string(ok) + " of " + std::to_string(cells.size()) +
                                 " cells estimated");
  }
  out.finish();
  return out.report;
}

namespace {

struct GarchSeries {
  bool ok = false;
  std::vector<std::optional<double>> z; ///< by day
  double median_sigma = 0;
  std::string failure;
};

GarchSeries filter_series(const std::vector<std::optional<double>>& r)
{
  GarchSeries out;
  out.z.resize(r.size());
  std::vector<double> values;
  std::vector<std::size_t> days;
  for (std::size_t t = 0; t < r.size(); ++t)
    if (r[t]) {
      values.push_back(*r[t]);
      days.push_back(t);
    }
  if (values.size() < 2) {
    out.failure = "fewer than two returns";
    return out;
  }
  simulate::GarchParams params;
  try {
    params = simulate::fit_ma1_garch11(values).params;
  } catch (const Error& e) {
    // plain standardization keeps the series in the simulation
    out.failure = std::string(errc_name(e.code())) + ": " + e.what();
    double sd = stats::sample_sd(values);
    params = {stats::mean(values), 0.0, sd * sd, 0.0, 0.0};
  }
  try {
    auto st = simulate::standardize_residuals(values, params);
    for (std::size_t k = 0; k < days.size(); ++k)
      out.z[days[k]] = st.z[k];
    std::vector<double> sig = st.sigma;
    std::sort(sig.begin(), sig.end());
    out.median_sigma = stats::quantile_sorted(sig, 0.5);
    out.ok = true;
  } catch (const Error& e) {
    out.ok = false;
    out.failure = std::string(errc_name(e.code())) + ": " + e.what();
  }
  return out;
}

const char* pos_color = "#1f5fbf";
const char* neg_color = "#c0392b";

} // namespace

CommandReport cmd_simulate(const RunConfig& config)
{
  validate(config);
  if (config.n_boot < 100)
    throw Error(Errc::too_few_bootstraps, "n_boot must be at least 100, got " + std::to_string(config.n_boot));
  auto cal = load_calendar(config);
  auto data = load_suite_data(config, cal);
  auto fits_path = config.fits.empty() ? out_file(config, "fits_entire.json") : config.fits;
  require_file(fits_path, "regression result file");
  ordered_json fits;
  try {
    fits = ordered_json::parse(io::read_file(fits_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed_record, fits_path.string() + ": " + e.what());
  }

  Outputs out(config, "simulate");
  out.input("sentiment.csv", out_file(config, "sentiment.csv"));
  out.input("indicators.csv", out_file(config, "indicators.csv"));
  out.input("market.csv", out_file(config, "market.csv"));
  out.input("fits", fits_path);

  // return filters, shared by every lexicon
  auto market = filter_series(data.market.market_return);
  if (!market.ok)
    throw Error(Errc::non_convergence, "market return filter failed: " + market.failure);
  if (!market.failure.empty())
    out.report.warnings.push_back("market: GARCH fit failed (" + market.failure + "); using plain standardization");
  std::vector<std::string> symbols;
  for (const auto& [sym, series] : data.indicators)
    symbols.push_back(sym);
  std::vector<GarchSeries> filtered(symbols.size());
  {
    auto work = [&](std::size_t begin, std::size_t stride) {
      for (std::size_t i = begin; i < symbols.size(); i += stride) {
        std::vector<std::optional<double>> r;
        for (const auto& p : data.indicators.at(symbols[i]))
          r.push_back(p.ret);
        filtered[i] = filter_series(r);
      }
    };
    std::size_t threads = std::min(effective_threads(config.threads), std::max<std::size_t>(symbols.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < threads; ++w)
      pool.emplace_back(work, w, threads);
    work(0, threads);
    for (auto& t : pool)
      t.join();
  }
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!filtered[i].ok)
      out.report.warnings.push_back(symbols[i] + ": return filter failed (" + filtered[i].failure + "); excluded");
    else if (!filtered[i].failure.empty())
      out.report.warnings.push_back(symbols[i] + ": GARCH fit failed (" + filtered[i].failure +
                                    "); using plain standardization");
  }

  double vix_sum = 0;
  std::size_t vix_n = 0;
  for (const auto& v : data.market.vix)
    if (v) {
      vix_sum += *v;
      ++vix_n;
    }
  if (vix_n == 0)
    throw Error(Errc::missing_component, "volatility index series");
  const double vix_mean = vix_sum / static_cast<double>(vix_n);

  std::size_t lex_index = 0;
  std::size_t simulated = 0;
  for (const auto& cell : fits) {
    if (cell.value("dependent", "") != "log_vol" || cell.value("h", 0) != 1 || cell.value("cumulative", false) ||
        cell.value("subsample", "") != "all" || cell.value("projection", "") == "PCA")
      continue;
    const std::string lex = cell.at("projection").get<std::string>();
    auto sit = data.sentiment.find(lex);
    if (sit == data.sentiment.end()) {
      out.report.warnings.push_back(lex + ": no sentiment records; skipped");
      continue;
    }
    const std::uint64_t lex_seed = stats::derive_seed(config.seed, lex_index++);

    simulate::ScenarioConfig sc;
    sc.alpha = cell.at("alpha").get<double>();
    auto cols = cell.at("columns").get<std::vector<std::string>>();
    auto beta = cell.at("beta").get<std::vector<double>>();
    for (std::size_t j = 0; j < cols.size() && j < beta.size(); ++j)
      sc.beta[cols[j]] = beta[j];
    sc.residuals = cell.at("residuals").get<std::vector<double>>();
    sc.vix = vix_mean;
    sc.n_days = config.sim_days > 0 ? config.sim_days : cal.size();
    sc.seed = lex_seed;
    sc.market_sigma_scale = market.median_sigma;

    std::vector<std::size_t> included;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (!filtered[i].ok)
        continue;
      auto rit = sit->second.find(symbols[i]);
      if (rit == sit->second.end())
        continue;
      std::vector<double> pos, neg;
      for (const auto& r : rit->second)
        if (r.active) {
          pos.push_back(r.pos);
          neg.push_back(r.neg);
        }
      if (pos.size() < config.min_active_days) {
        out.report.warnings.push_back(lex + "/" + symbols[i] + ": " + std::to_string(pos.size()) +
                                      " active days, below " + std::to_string(config.min_active_days) + "; excluded");
        continue;
      }
      Eigen::MatrixXd m(static_cast<Eigen::Index>(pos.size()), 2);
      for (std::size_t k = 0; k < pos.size(); ++k) {
        m(static_cast<Eigen::Index>(k), 0) = pos[k];
        m(static_cast<Eigen::Index>(k), 1) = neg[k];
      }
      simulate::SymbolComponents comp;
      comp.symbol = symbols[i];
      comp.p = indicators::attention_ratio(rit->second, rit->second.size());
      try {
        comp.copula = simulate::fit_gaussian_copula(m);
      } catch (const Error& e) {
        out.report.warnings.push_back(lex + "/" + symbols[i] + ": " + std::string(errc_name(e.code())) + "; excluded");
        continue;
      }
      comp.marginals = {simulate::EmpiricalDistribution(pos), simulate::EmpiricalDistribution(neg)};
      comp.sigma_scale = filtered[i].median_sigma;
      sc.symbols.push_back(std::move(comp));
      included.push_back(i);
    }
    if (sc.symbols.empty())
      throw Error(Errc::missing_component, lex + ": no symbol has enough active days");

    // joint standardized residuals on days every included series covers
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < cal.size(); ++t) {
      if (!market.z[t])
        continue;
      std::vector<double> row{*market.z[t]};
      bool complete = true;
      for (auto i : included) {
        if (!filtered[i].z[t]) {
          complete = false;
          break;
        }
        row.push_back(*filtered[i].z[t]);
      }
      if (complete)
        rows.push_back(std::move(row));
    }
    const auto d = static_cast<Eigen::Index>(included.size() + 1);
    Eigen::MatrixXd zm(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (Eigen::Index j = 0; j < d; ++j)
        zm(static_cast<Eigen::Index>(r), j) = rows[r][static_cast<std::size_t>(j)];
    sc.residual_copula = simulate::fit_gaussian_copula(zm);
    if (sc.residual_copula->repaired)
      out.report.warnings.push_back(lex + ": residual correlation repaired to be positive semidefinite");
    for (Eigen::Index j = 0; j < d; ++j)
      sc.residual_marginals.emplace_back(std::vector<double>(zm.col(j).data(), zm.col(j).data() + zm.rows()));

    auto obs = simulate::simulate_scenario(sc);
    simulated += obs.size();

    std::string csv = "symbol,day,I,pos,neg,market_return,ret,log_vol\n";
    std::vector<double> xp, xn, y;
    for (const auto& o : obs) {
      csv += sc.symbols[o.symbol].symbol + ',' + std::to_string(o.day) + ',' + (o.active ? "1," : "0,") +
             io::format_double(o.pos) + ',' + io::format_double(o.neg) + ',' + io::format_double(o.market_return) +
             ',' + io::format_double(o.ret) + ',' + io::format_double(o.log_vol) + '\n';
      xp.push_back(o.pos);
      xn.push_back(o.neg);
      y.push_back(o.log_vol);
    }
    out.write("simulated_" + lex + ".csv", csv);

    simulate::AsymmetryCurves ac;
    try {
      ac = simulate::asymmetry_curves(obs, config.grid_points, config.level, config.n_boot, lex_seed);
    } catch (const Error& e) {
      throw Error(e.code(), lex + ": " + e.what());
    }
    const auto& grid = ac.grid;
    const auto& fit_pos = ac.pos;
    const auto& fit_neg = ac.neg;
    const auto& overlap = ac.separated;
    const double lo = grid.front(), hi = grid.back();
    if (fit_pos.empty_points + fit_neg.empty_points > 0)
      out.report.warnings.push_back(lex + ": " + std::to_string(fit_pos.empty_points + fit_neg.empty_points) +
                                    " grid points had an empty neighborhood");

    std::string curves = "x,pos_fit,pos_lower,pos_upper,neg_fit,neg_lower,neg_upper\n";
    for (std::size_t g = 0; g < grid.size(); ++g)
      curves += io::format_double(grid[g]) + ',' + io::format_double(fit_pos.curve[g]) + ',' +
                io::format_double(fit_pos.lower[g]) + ',' + io::format_double(fit_pos.upper[g]) + ',' +
                io::format_double(fit_neg.curve[g]) + ',' + io::format_double(fit_neg.lower[g]) + ',' +
                io::format_double(fit_neg.upper[g]) + '\n';
    out.write("curves_" + lex + ".csv", curves);

    std::string ov = "lo,hi,upper_curve\n";
    for (const auto& iv : overlap)
      ov += io::format_double(iv.lo) + ',' + io::format_double(iv.hi) + ',' + (iv.neg_above ? "neg" : "pos") + '\n';
    out.write("overlap_" + lex + ".csv", ov);

    report::Figure fig;
    fig.title = "Simulated log volatility against sentiment (" + lex + ")";
    fig.x_label = "sentiment";
    fig.y_label = "log volatility";
    // scatter every simulated point; the band limits the vertical range
    fig.scatter.push_back({"Pos", pos_color, xp, y});
    fig.scatter.push_back({"Neg", neg_color, xn, y});
    fig.curves.push_back(report::curve_from_fit(fit_pos, "Pos (h=" + fixed(fit_pos.h, 4) + ")", pos_color));
    fig.curves.push_back(report::curve_from_fit(fit_neg, "Neg (h=" + fixed(fit_neg.h, 4) + ")", neg_color));
    for (const auto& iv : overlap)
      fig.highlights.emplace_back(iv.lo, iv.hi);
    fig.x_range = std::make_pair(lo, hi);
    double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
    for (const auto* f : {&fit_pos, &fit_neg})
      for (std::size_t g = 0; g < grid.size(); ++g)
        if (!std::isnan(f->curve[g])) {
          ylo = std::min(ylo, f->lower[g]);
          yhi = std::max(yhi, f->upper[g]);
        }
    if (std::isfinite(ylo) && yhi > ylo) {
      double pad = 0.5 * (yhi - ylo);
      fig.y_range = std::make_pair(ylo - pad, yhi + pad);
    }
    out.write("figure_" + lex + ".svg", report::render_svg(fig));

    std::string intervals;
    for (const auto& iv : overlap)
      intervals += " [" + fixed(iv.lo, 4) + ", " + fixed(iv.hi, 4) + "]" + (iv.neg_above ? "neg" : "pos");
    out.report.summary.push_back(lex + ": " + std::to_string(sc.symbols.size()) + " symbols, bandwidths " +
                                 fixed(fit_pos.h, 5) + "/" + fixed(fit_neg.h, 5) + ", separated:" +
                                 (intervals.empty() ? std::string(" none") : intervals));
  }
  if (lex_index == 0)
    throw Error(Errc::missing_component, "no entire-sample log-volatility regression in " + fits_path.string());
  out.report.summary.push_back("simulated observations: " + std::to_string(simulated));
  out.finish();
  return out.report;
}

CommandReport cmd_lexstats(const RunConfig& config)
{
  validate(config);
  auto cal = load_calendar(config);
  auto lexica = load_lexica(config);
  auto set = load_corpus(config, cal);
  std::vector<sentiment::TokenizedArticle> tokenized;
  for (const auto& a : set.articles) {
    try {
      tokenized.push_back(sentiment::tokenize(a.body));
    } catch (const Error&) {
    }
  }
  auto freq = sentiment::word_frequencies(tokenized);

  Outputs out(config, "lexstats");
  out.input("corpus", config.corpus);
  std::string csv = "lexicon_a,lexicon_b,polarity,category,word,frequency\n";
  std::string txt;
  auto top = [&](const std::vector<std::string>& words) {
    std::string s;
    for (std::size_t i = 0; i < words.size() && i < config.top_k; ++i)
      s += (i ? ", " : "") + words[i] + " (" + std::to_string(freq[words[i]]) + ")";
    return s;
  };
  for (std::size_t a = 0; a < lexica.size(); ++a) {
    for (std::size_t b = a + 1; b < lexica.size(); ++b) {
      auto rep = lexicon::compare_lexica(lexica[a], lexica[b], freq, config.min_count);
      txt += rep.a_name + " vs " + rep.b_name + "\n";
      for (auto [label, pc] : {std::pair{"positive", &rep.positive}, std::pair{"negative", &rep.negative}}) {
        for (auto [cat, list] : {std::pair{"unique_to_a", &pc->unique_to_a}, std::pair{"unique_to_b", &pc->unique_to_b},
                                 std::pair{"shared", &pc->shared}}) {
          for (const auto& w : *list)
            csv += rep.a_name + ',' + rep.b_name + ',' + label + ',' + cat + ',' + io::csv_escape(w) + ',' +
                   std::to_string(freq[w]) + '\n';
          txt += "  " + std::string(label) + " " + cat + " [" + std::to_string(list->size()) + "]: " + top(*list) + "\n";
        }
      }
      txt += "\n";
    }
  }
  std::vector<const lexicon::Lexicon*> ptrs;
  for (const auto& l : lexica)
    ptrs.push_back(&l);
  auto table = lexicon::partition_by_membership(ptrs, freq, config.min_count);
  txt += "membership (lexica:";
  for (const auto& l : lexica)
    txt += " " + l.name();
  txt += ")\n";
  for (auto [label, groups] : {std::pair{"positive", &table.positive}, std::pair{"negative", &table.negative}}) {
    for (const auto& [mask, words] : *groups) {
      std::string members;
      for (std::size_t i = 0; i < lexica.size(); ++i)
        if (mask & (1u << i))
          members += (members.empty() ? "" : "+") + lexica[i].name();
      txt += "  " + std::string(label) + " " + members + " [" + std::to_string(words.size()) + "]: " + top(words) + "\n";
    }
  }
  out.write("lexstats.csv", csv);
  out.write("lexstats.txt", txt);
  out.report.summary.push_back("distinct corpus words: " + std::to_string(freq.size()));
  out.finish();
  return out.report;
}

CommandReport cmd_report(const RunConfig& config)
{
  validate(config);
  auto cal = load_calendar(config);
  auto sent_path = out_file(config, "sentiment.csv");
  require_file(sent_path, "sentiment file");
  auto by_lexicon = sentiment::read_sentiment_csv(sent_path, cal);

  Outputs out(config, "report");
  out.input("sentiment.csv", sent_path);

  std::string summary = "lexicon,variable,n_active,mean,sd,max,q1,median,q3,polarity_share\n";
  for (const auto& [name, recs] : by_lexicon) {
    auto s = sentiment::sentiment_summary(recs);
    for (auto [label, v] : {std::pair{"Pos", &s.pos}, std::pair{"Neg", &s.neg}})
      summary += name + ',' + label + ',' + std::to_string(s.n_active) + ',' + io::format_double(v->mean) + ',' +
                 io::format_double(v->sd) + ',' + io::format_double(v->max) + ',' + io::format_double(v->q1) + ',' +
                 io::format_double(v->q2) + ',' + io::format_double(v->q3) + ',' + io::format_double(v->polarity_share) +
                 '\n';
  }
  out.write("summary_stats.csv", summary);

  auto scores_path = out_file(config, "article_scores.csv");
  if (fs::exists(scores_path)) {
    out.input("article_scores.csv", scores_path);
    auto table = io::read_csv(scores_path);
    auto c_id = table.column("article_id"), c_lex = table.column("lexicon"), c_cls = table.column("class");
    std::map<std::string, std::string> labels;
    if (!config.labels.empty()) {
      require_file(config.labels, "label file");
      out.input("labels", config.labels);
      auto lt = io::read_csv(config.labels);
      auto l_id = lt.column("article_id"), l_lab = lt.column("label");
      for (const auto& row : lt.rows)
        if (row.size() > std::max(l_id, l_lab))
          labels[row[l_id]] = io::to_lower(io::trim(row[l_lab]));
    }
    // lexicon -> predicted -> label ("" when unlabeled) -> count
    std::map<std::string, std::map<std::string, std::map<std::string, std::size_t>>> counts;
    for (const auto& row : table.rows) {
      if (row.size() < table.header.size())
        continue;
      auto it = labels.find(row[c_id]);
      counts[row[c_lex]][row[c_cls]][it == labels.end() ? "" : it->second] += 1;
    }
    std::string cls = "lexicon,predicted,label,count\n";
    for (const auto& [lex, by_pred] : counts)
      for (const auto& [pred, by_label] : by_pred)
        for (const auto& [label, n] : by_label)
          cls += lex + ',' + pred + ',' + io::csv_escape(label) + ',' + std::to_string(n) + '\n';
    out.write("classification.csv", cls);
  }

  auto monthly = sentiment::monthly_lexicon_correlation(by_lexicon, cal);
  std::string mc = "lexicon_a,lexicon_b,month,n,pos_corr,neg_corr\n";
  std::map<std::string, std::pair<report::CurveLayer, report::CurveLayer>> lines;
  std::map<std::string, std::size_t> month_index;
  for (const auto& m : monthly)
    month_index.emplace(m.month, 0);
  std::size_t k = 0;
  for (auto& [m, i] : month_index)
    i = k++;
  const char* palette[] = {"#1f5fbf", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085"};
  for (const auto& m : monthly) {
    mc += m.lexicon_a + ',' + m.lexicon_b + ',' + m.month + ',' + std::to_string(m.n) + ',' +
          (m.pos ? io::format_double(*m.pos) : "") + ',' + (m.neg ? io::format_double(*m.neg) : "") + '\n';
    auto key = m.lexicon_a + "-" + m.lexicon_b;
    auto& [lp, ln] = lines[key];
    const char* color = palette[(lines.size() - 1) % 6];
    lp.label = ln.label = key;
    lp.color = ln.color = color;
    double x = static_cast<double>(month_index[m.month]);
    lp.x.push_back(x);
    lp.y.push_back(m.pos ? *m.pos : std::numeric_limits<double>::quiet_NaN());
    ln.x.push_back(x);
    ln.y.push_back(m.neg ? *m.neg : std::numeric_limits<double>::quiet_NaN());
  }
  out.write("monthly_correlation.csv", mc);
  for (bool positive : {true, false}) {
    report::Figure fig;
    fig.title = std::string("Monthly correlation of ") + (positive ? "positive" : "negative") + " proportions";
    fig.x_label = "month index";
    fig.y_label = "Pearson correlation";
    fig.y_range = std::make_pair(-1.0, 1.0);
    for (const auto& [key, pair] : lines)
      fig.curves.push_back(positive ? pair.first : pair.second);
    out.write(positive ? "monthly_correlation_pos.svg" : "monthly_correlation_neg.svg", report::render_svg(fig));
  }
  out.report.summary.push_back("lexica: " + std::to_string(by_lexicon.size()) + ", months: " +
                               std::to_string(month_index.size()));
  out.finish();
  return out.report;
}

} // namespace newsflow::cli
