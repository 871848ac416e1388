#include "newsflow/panel.hpp"

#include "newsflow/text_io.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <thread>

namespace newsflow::panel {

std::string_view to_string(Suite s) noexcept
{
  switch (s) {
  case Suite::entire:
    return "entire";
  case Suite::lags_noncumulative:
    return "lags_noncumulative";
  case Suite::lags_cumulative:
    return "lags_cumulative";
  case Suite::attention:
    return "attention";
  case Suite::sector:
    return "sector";
  }
  return "?";
}

std::optional<Suite> parse_suite(std::string_view name)
{
  for (auto s : {Suite::entire, Suite::lags_noncumulative, Suite::lags_cumulative, Suite::attention, Suite::sector})
    if (to_string(s) == name)
      return s;
  return std::nullopt;
}

namespace {

constexpr Dependent all_dependents[] = {Dependent::log_vol, Dependent::volume, Dependent::ret};

std::vector<std::string> lexicon_names(const SuiteData& data)
{
  std::vector<std::string> out;
  for (const auto& [name, series] : data.sentiment)
    out.push_back(name);
  return out;
}

} // namespace

std::vector<PanelSpec> suite_specs(const SuiteData& data, Suite suite)
{
  std::vector<PanelSpec> out;
  auto lexica = lexicon_names(data);
  auto add = [&](const std::vector<std::string>& projections, std::size_t h, bool cumulative,
                 const std::optional<std::set<std::string>>& subsample, const std::string& subsample_name) {
    for (auto dep : all_dependents)
      for (const auto& proj : projections)
        out.push_back({dep, h, cumulative, proj, subsample, subsample_name});
  };

  switch (suite) {
  case Suite::entire: {
    auto projections = lexica;
    if (data.include_pca && lexica.size() >= 2)
      projections.push_back("PCA");
    add(projections, 1, false, std::nullopt, "all");
    break;
  }
  case Suite::lags_noncumulative:
  case Suite::lags_cumulative:
    for (std::size_t h = 2; h <= 5; ++h)
      add(lexica, h, suite == Suite::lags_cumulative, std::nullopt, "all");
    break;
  case Suite::attention: {
    if (lexica.empty())
      break;
    const auto& series = data.sentiment.begin()->second;
    std::map<std::string, double> ratios;
    for (const auto& [symbol, records] : series)
      if (!records.empty())
        ratios[symbol] = indicators::attention_ratio(records, records.size());
    auto groups = indicators::attention_groups(ratios);
    for (auto g : {indicators::AttentionGroup::low, indicators::AttentionGroup::median,
                   indicators::AttentionGroup::high, indicators::AttentionGroup::extremely_high}) {
      std::set<std::string> members;
      for (const auto& [symbol, group] : groups)
        if (group == g)
          members.insert(symbol);
      add(lexica, 1, false, members, std::string(indicators::to_string(g)));
    }
    break;
  }
  case Suite::sector: {
    std::map<std::string, std::set<std::string>> members;
    for (const auto& [symbol, sector] : data.sectors)
      members[sector].insert(symbol);
    for (const auto& [sector, symbols] : members)
      add(lexica, 1, false, symbols, sector);
    break;
  }
  }
  return out;
}

std::vector<SuiteCell> run_specification_suite(const SuiteData& data, Suite suite, CovarianceMode mode,
                                               std::size_t threads)
{
  auto specs = suite_specs(data, suite);
  std::optional<SymbolSeries> pca;
  for (const auto& s : specs)
    if (s.projection == "PCA" && !pca)
      pca = build_pca_series(data.sentiment).series;

  std::vector<SuiteCell> cells(specs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      auto& cell = cells[i];
      cell.spec = specs[i];
      try {
        const auto& series = cell.spec.projection == "PCA" ? *pca : data.sentiment.at(cell.spec.projection);
        auto dataset = assemble_panel(series, data.indicators, data.market, cell.spec);
        cell.dropped_missing = dataset.dropped_missing;
        cell.result = fit_fixed_effects(dataset, mode);
      } catch (const Error& e) {
        cell.error = e.code();
        cell.message = e.what();
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, specs.size()));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back(work);
    for (auto& t : pool)
      t.join();
  }
  return cells;
}

std::string format_results_csv(std::span<const SuiteCell> cells)
{
  std::string out = "spec_id,variable,estimate,se,p,stars\n";
  for (const auto& cell : cells) {
    auto id = io::csv_escape(cell.spec.id());
    if (!cell.result) {
      out += id + ",error," + std::string(errc_name(*cell.error)) + ",,,\n";
      continue;
    }
    const auto& r = *cell.result;
    for (std::size_t j = 0; j < r.columns.size(); ++j) {
      auto jj = static_cast<Eigen::Index>(j);
      out += id + ',' + r.columns[j] + ',' + io::format_double(r.beta(jj)) + ',' + io::format_double(r.se(jj)) + ',' +
             io::format_double(r.p(jj)) + ',' + stars(r.p(jj)) + '\n';
    }
    out += id + ",alpha," + io::format_double(r.alpha) + ",,,\n";
    out += id + ",n," + std::to_string(r.n) + ",,,\n";
  }
  return out;
}

namespace {

std::string fixed(double v, int prec)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w)
{
  return s.size() >= w ? s + " " : std::string(w - s.size(), ' ') + s;
}

} // namespace

std::string format_results_table(std::span<const SuiteCell> cells)
{
  // group consecutive cells sharing subsample, lag and dependent
  std::string out;
  std::size_t i = 0;
  while (i < cells.size()) {
    const auto& head = cells[i].spec;
    std::size_t j = i;
    while (j < cells.size() && cells[j].spec.subsample_name == head.subsample_name && cells[j].spec.h == head.h &&
           cells[j].spec.cumulative == head.cumulative && cells[j].spec.dependent == head.dependent)
      ++j;
    auto block = cells.subspan(i, j - i);
    out += "Dependent: " + std::string(to_string(head.dependent)) + "(t+" + std::to_string(head.h) + ")";
    out += "  sample: " + head.subsample_name + (head.cumulative ? "  cumulative" : "") + "\n";
    const std::size_t w0 = 10, w = 14;
    out += pad("", w0);
    for (const auto& c : block)
      out += pad(c.spec.projection, w);
    out += "\n";
    for (std::size_t v = 0; v < regressor_names().size(); ++v) {
      std::string est = pad(regressor_names()[v], w0), se = pad("", w0);
      for (const auto& c : block) {
        if (!c.result) {
          est += pad(v == 0 ? std::string(errc_name(*c.error)) : "", w);
          se += pad("", w);
          continue;
        }
        auto vv = static_cast<Eigen::Index>(v);
        est += pad(fixed(c.result->beta(vv), 4) + stars(c.result->p(vv)), w);
        se += pad("(" + fixed(c.result->se(vv), 4) + ")", w);
      }
      out += est + "\n" + se + "\n";
    }
    std::string nrow = pad("n", w0);
    for (const auto& c : block)
      nrow += pad(c.result ? std::to_string(c.result->n) : "-", w);
    out += nrow + "\n\n";
    i = j;
  }
  out += "*** p<0.01, ** p<0.05, * p<0.1\n";
  return out;
}

std::string format_fits_json(std::span<const SuiteCell> cells)
{
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& cell : cells) {
    if (!cell.result)
      continue;
    const auto& r = *cell.result;
    nlohmann::ordered_json j;
    j["id"] = cell.spec.id();
    j["dependent"] = std::string(to_string(cell.spec.dependent));
    j["h"] = cell.spec.h;
    j["cumulative"] = cell.spec.cumulative;
    j["projection"] = cell.spec.projection;
    j["subsample"] = cell.spec.subsample_name;
    j["columns"] = r.columns;
    j["beta"] = std::vector<double>(r.beta.data(), r.beta.data() + r.beta.size());
    j["se"] = std::vector<double>(r.se.data(), r.se.data() + r.se.size());
    j["alpha"] = r.alpha;
    j["n"] = r.n;
    j["residuals"] = std::vector<double>(r.residuals.data(), r.residuals.data() + r.residuals.size());
    arr.push_back(std::move(j));
  }
  return arr.dump(1) + "\n";
}

} // namespace newsflow::panel
