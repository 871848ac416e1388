// newsflow: news sentiment, stock-reaction indicators, panel regressions and
// volatility simulation from one configuration file.

#include "newsflow/config.hpp"
#include "newsflow/error.hpp"
#include "newsflow/pipeline.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <optional>

using namespace newsflow;

namespace {

struct Overrides {
  std::string config = "config.ini";
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
  std::optional<int> utc_shift;
  std::optional<std::size_t> window;
  std::vector<std::string> suites;
  std::optional<std::string> covariance;
  std::optional<std::size_t> lag;
  std::optional<std::size_t> n_boot;
  std::optional<std::size_t> sim_days;
  std::optional<std::string> fits;
  std::optional<std::string> labels;
  bool quiet = false;
};

cli::RunConfig resolve(const Overrides& o)
{
  cli::RunConfig c = cli::load_config(o.config);
  if (o.out)
    c.output_dir = *o.out;
  if (o.threads)
    c.threads = *o.threads;
  if (o.seed)
    c.seed = *o.seed;
  if (o.utc_shift)
    c.utc_shift_minutes = *o.utc_shift;
  if (o.window)
    c.detrend_window = *o.window;
  if (!o.suites.empty()) {
    c.suites.clear();
    for (const auto& s : o.suites) {
      auto parsed = panel::parse_suite(s);
      if (!parsed)
        throw Error(Errc::config_error, "unknown suite '" + s + "'");
      c.suites.push_back(*parsed);
    }
  }
  if (o.covariance) {
    auto mode = panel::parse_covariance_mode(*o.covariance);
    if (!mode)
      throw Error(Errc::config_error, "unknown covariance mode '" + *o.covariance + "'");
    c.covariance = *mode;
  }
  if (o.lag)
    c.lag = *o.lag;
  if (o.n_boot)
    c.n_boot = *o.n_boot;
  if (o.sim_days)
    c.sim_days = *o.sim_days;
  if (o.fits)
    c.fits = *o.fits;
  if (o.labels)
    c.labels = *o.labels;
  cli::validate(c);
  return c;
}

int run(const Overrides& o, const std::function<cli::CommandReport(const cli::RunConfig&)>& cmd)
{
  try {
    auto report = cmd(resolve(o));
    if (!o.quiet) {
      for (const auto& line : report.summary)
        std::cout << line << '\n';
      for (const auto& w : report.warnings)
        std::cerr << "warning: " << w << '\n';
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << '\n';
    return is_numerical(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: IO_ERROR: " << e.what() << '\n';
    return 2;
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"news sentiment and volatility toolkit"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("-c,--config", o.config, "configuration file")->capture_default_str();
  app.add_option("-o,--out", o.out, "output directory");
  app.add_option("-j,--threads", o.threads, "worker threads");
  app.add_option("--seed", o.seed, "random seed");
  app.add_flag("-q,--quiet", o.quiet, "suppress the summary");

  std::function<cli::CommandReport(const cli::RunConfig&)> chosen;

  auto* distill = app.add_subcommand("distill", "score articles and aggregate daily sentiment");
  distill->add_option("--utc-shift", o.utc_shift, "day boundary offset from UTC midnight, in minutes");
  distill->callback([&] { chosen = cli::cmd_distill; });

  auto* indicators = app.add_subcommand("indicators", "log volatility, detrended volume and returns");
  indicators->add_option("--window", o.window, "detrending window")->check(CLI::PositiveNumber);
  indicators->callback([&] { chosen = cli::cmd_indicators; });

  auto* pnl = app.add_subcommand("panel", "fixed-effects regression suites");
  pnl->add_option("--suite", o.suites, "entire, lags_noncumulative, lags_cumulative, attention, sector");
  pnl->add_option("--covariance", o.covariance, "classical, hc, by_entity, by_time, two_way");
  pnl->add_option("--lag", o.lag, "horizon for the entire, attention and sector suites");
  pnl->callback([&] { chosen = cli::cmd_panel; });

  auto* sim = app.add_subcommand("simulate", "scenario simulation, smoothed curves and bands");
  sim->add_option("--n-boot", o.n_boot, "bootstrap replications for the bands");
  sim->add_option("--days", o.sim_days, "simulated days per symbol");
  sim->add_option("--fits", o.fits, "regression fits JSON");
  sim->callback([&] { chosen = cli::cmd_simulate; });

  auto* lex = app.add_subcommand("lexstats", "lexicon overlap and corpus coverage");
  lex->callback([&] { chosen = cli::cmd_lexstats; });

  auto* rep = app.add_subcommand("report", "summary statistics, classification and monthly correlations");
  rep->add_option("--labels", o.labels, "hand labels CSV");
  rep->callback([&] { chosen = cli::cmd_report; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    std::cerr << "error: USAGE: " << e.what() << '\n';
    return 2;
  }
  return run(o, chosen);
}
