#include "newsflow/fixture.hpp"
#include "newsflow/text_io.hpp"

#include "test_util.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <set>

using testutil::TempDir;

namespace {

struct Run {
  int code = -1;
  std::string err;
};

Run newsflow_cli(const TempDir& dir, const std::string& args)
{
  auto err_path = dir / "stderr.txt";
  std::string cmd = std::string(NEWSFLOW_CLI) + " -q -c " + (dir / "config.ini").string() + " " + args + " 2> " +
                    err_path.string();
  int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = newsflow::io::read_file(err_path);
  return r;
}

std::size_t line_count(const std::filesystem::path& p) { return newsflow::io::read_lines(p).size(); }

newsflow::fixture::FixtureOptions small(std::size_t days = 130)
{
  newsflow::fixture::FixtureOptions o;
  o.n_symbols = 6;
  o.n_days = days;
  return o;
}

} // namespace

TEST_CASE("distill writes one row per symbol, day and lexicon")
{
  TempDir dir("cli_distill");
  newsflow::fixture::write_fixture(dir.path(), small());
  auto r = newsflow_cli(dir, "distill");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(line_count(dir / "out/sentiment.csv") == 1 + 6 * 130 * 3);
}

TEST_CASE("input errors exit with status 2 and a single coded line")
{
  TempDir dir("cli_errors");
  newsflow::fixture::write_fixture(dir.path(), small());

  std::filesystem::rename(dir / "lexb_negative.txt", dir / "moved.txt");
  auto lex = newsflow_cli(dir, "distill");
  CHECK(lex.code == 2);
  CHECK(lex.err.rfind("error: LEXICON_NOT_FOUND: ", 0) == 0);
  CHECK(std::count(lex.err.begin(), lex.err.end(), '\n') == 1);
  std::filesystem::rename(dir / "moved.txt", dir / "lexb_negative.txt");

  auto articles = newsflow::io::read_file(dir / "articles.jsonl");
  dir.write("articles.jsonl", "");
  auto empty = newsflow_cli(dir, "distill");
  CHECK(empty.code == 2);
  CHECK(empty.err.find("EMPTY_CORPUS") != std::string::npos);
  dir.write("articles.jsonl", articles);

  auto prices = newsflow::io::read_file(dir / "prices.csv");
  auto lines = newsflow::io::read_lines(dir / "prices.csv");
  auto cells = newsflow::io::split(lines[5], ',');
  std::swap(cells[3], cells[4]); // high below low
  std::string broken;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 5) {
      for (std::size_t c = 0; c < cells.size(); ++c)
        broken += (c ? "," : "") + cells[c];
    } else {
      broken += lines[i];
    }
    broken += '\n';
  }
  dir.write("prices.csv", broken);
  auto bad = newsflow_cli(dir, "indicators");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("PRICE_PARSE_ERROR") != std::string::npos);
  CHECK(bad.err.find("prices.csv:6") != std::string::npos);
  dir.write("prices.csv", prices);

  REQUIRE(newsflow_cli(dir, "distill").code == 0);
  auto panel = newsflow_cli(dir, "panel");
  CHECK(panel.code == 2);
  CHECK(panel.err.find("MISSING_INPUT") != std::string::npos);

  auto usage = newsflow_cli(dir, "frobnicate");
  CHECK(usage.code == 2);
}

TEST_CASE("indicators: warm-up and byte-identical reruns")
{
  TempDir dir("cli_indicators");
  newsflow::fixture::write_fixture(dir.path(), small());
  REQUIRE(newsflow_cli(dir, "indicators").code == 0);
  auto first = newsflow::io::read_file(dir / "out/indicators.csv");
  REQUIRE(newsflow_cli(dir, "indicators").code == 0);
  CHECK(newsflow::io::read_file(dir / "out/indicators.csv") == first);

  auto table = newsflow::io::read_csv(dir / "out/indicators.csv");
  auto v = table.column("detrended_volume");
  std::size_t row_of_day = 0;
  for (const auto& row : table.rows) {
    if (row[0] != "S00")
      continue;
    if (row_of_day < 120)
      CHECK_MESSAGE(row[v].empty(), "day " << row_of_day + 1);
    else
      CHECK_MESSAGE(!row[v].empty(), "day " << row_of_day + 1);
    ++row_of_day;
  }
  CHECK(row_of_day == 130);
}

TEST_CASE("panel, simulate and report end to end")
{
  TempDir dir("cli_e2e");
  auto opt = small(300);
  newsflow::fixture::write_fixture(dir.path(), opt);
  for (const char* cmd : {"distill", "indicators", "panel --suite entire"})
    REQUIRE_MESSAGE(newsflow_cli(dir, cmd).code == 0, cmd);
  auto results = newsflow::io::read_csv(dir / "out/results_entire.csv");
  std::set<std::string> cells;
  for (const auto& row : results.rows)
    cells.insert(row[0]);
  CHECK(cells.size() == 12);

  auto few = newsflow_cli(dir, "simulate --n-boot 50");
  CHECK(few.code == 2);
  CHECK(few.err.find("TOO_FEW_BOOTSTRAPS") != std::string::npos);

  REQUIRE(newsflow_cli(dir, "simulate --n-boot 100").code == 0);
  auto curves = newsflow::io::read_file(dir / "out/curves_LEXA.csv");
  auto svg = newsflow::io::read_file(dir / "out/figure_LEXA.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  REQUIRE(newsflow_cli(dir, "simulate --n-boot 100").code == 0);
  CHECK(newsflow::io::read_file(dir / "out/curves_LEXA.csv") == curves);
  CHECK(newsflow::io::read_file(dir / "out/figure_LEXA.svg") == svg);

  // a strong negative-tone coefficient separates the two curves
  auto fits = nlohmann::json::parse(newsflow::io::read_file(dir / "out/fits_entire.json"));
  for (auto& cell : fits) {
    auto cols = cell["columns"].get<std::vector<std::string>>();
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] == "Neg")
        cell["beta"][k] = 40.0;
      if (cols[k] == "Pos")
        cell["beta"][k] = 0.0;
    }
    for (auto& e : cell["residuals"])
      e = e.get<double>() * 0.05;
  }
  dir.write("separated.json", fits.dump());
  REQUIRE(newsflow_cli(dir, "simulate --n-boot 100 --fits " + (dir / "separated.json").string()).code == 0);
  CHECK(line_count(dir / "out/overlap_LEXA.csv") > 1);

  REQUIRE(newsflow_cli(dir, "lexstats").code == 0);
  REQUIRE(newsflow_cli(dir, "report").code == 0);
  CHECK(std::filesystem::exists(dir / "out/summary_stats.csv"));
  CHECK(std::filesystem::exists(dir / "out/monthly_correlation_pos.svg"));
  auto manifest = nlohmann::json::parse(newsflow::io::read_file(dir / "out/run_manifest.json"));
  CHECK(manifest.contains("distill"));
  CHECK(manifest.contains("simulate"));
}

TEST_CASE("numerical failures exit with status 3")
{
  TempDir dir("cli_numeric");
  newsflow::fixture::write_fixture(dir.path(), small(150));
  for (const char* cmd : {"distill", "indicators", "panel --suite entire"})
    REQUIRE_MESSAGE(newsflow_cli(dir, cmd).code == 0, cmd);
  // a market index that never moves cannot be standardized
  auto lines = newsflow::io::read_lines(dir / "prices.csv");
  std::string flat;
  for (const auto& line : lines) {
    if (line.rfind("MARKET,", 0) == 0) {
      auto c = newsflow::io::split(line, ',');
      flat += c[0] + ',' + c[1] + ",100,100,100,100," + c[6] + '\n';
    } else {
      flat += line + '\n';
    }
  }
  dir.write("prices.csv", flat);
  REQUIRE(newsflow_cli(dir, "indicators").code == 0);
  auto r = newsflow_cli(dir, "simulate --n-boot 100");
  CHECK(r.code == 3);
  CHECK(r.err.find("NON_CONVERGENCE") != std::string::npos);
}
