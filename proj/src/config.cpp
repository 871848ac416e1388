#include "newsflow/config.hpp"

#include "newsflow/error.hpp"
#include "newsflow/text_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdlib>
#include <thread>

namespace newsflow::cli {

namespace pt = boost::property_tree;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value)
{
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

std::vector<std::string> list(const std::string& value)
{
  std::vector<std::string> out;
  for (const auto& part : io::split(value, ',')) {
    auto t = io::trim(part);
    if (!t.empty())
      out.emplace_back(t);
  }
  return out;
}

template <typename T>
T number(const pt::ptree& section, const std::string& section_name, const std::string& key, T fallback)
{
  auto v = section.get_optional<std::string>(key);
  if (!v)
    return fallback;
  auto where = "[" + section_name + "] " + key;
  if constexpr (std::is_floating_point_v<T>) {
    auto d = io::parse_double(*v);
    if (!d)
      throw Error(Errc::config_error, where + ": not a number: '" + *v + "'");
    return static_cast<T>(*d);
  } else {
    auto i = io::parse_int(*v);
    if (!i || (std::is_unsigned_v<T> && *i < 0))
      throw Error(Errc::config_error, where + ": not a valid integer: '" + *v + "'");
    return static_cast<T>(*i);
  }
}

bool boolean(const pt::ptree& section, const std::string& section_name, const std::string& key, bool fallback)
{
  auto v = section.get_optional<std::string>(key);
  if (!v)
    return fallback;
  auto s = io::to_lower(io::trim(*v));
  if (s == "true" || s == "yes" || s == "1" || s == "on")
    return true;
  if (s == "false" || s == "no" || s == "0" || s == "off")
    return false;
  throw Error(Errc::config_error, "[" + section_name + "] " + key + ": not a boolean: '" + *v + "'");
}

} // namespace

RunConfig load_config(const std::filesystem::path& path)
{
  if (!std::filesystem::exists(path))
    throw Error(Errc::missing_input, "config file not found: " + path.string());
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(Errc::config_error, e.what());
  }
  const auto base = std::filesystem::absolute(path).parent_path();
  RunConfig c;
  const pt::ptree empty;
  auto section = [&](const char* name) -> const pt::ptree& {
    auto it = tree.find(name);
    return it == tree.not_found() ? empty : it->second;
  };

  const auto& corpus_s = section("corpus");
  if (auto v = corpus_s.get_optional<std::string>("path"))
    c.corpus = resolve(base, *v);
  if (auto v = corpus_s.get_optional<std::string>("format")) {
    auto f = corpus::parse_corpus_format(io::trim(*v));
    if (!f)
      throw Error(Errc::config_error, "[corpus] format: unknown '" + *v + "'");
    c.corpus_format = *f;
  }
  if (auto v = corpus_s.get_optional<std::string>("calendar"))
    c.calendar = resolve(base, *v);
  c.utc_shift_minutes = number<int>(corpus_s, "corpus", "utc_shift_minutes", 0);
  if (auto v = corpus_s.get_optional<std::string>("symbols"))
    for (const auto& s : list(*v))
      c.symbols.push_back(io::to_upper(s));

  for (const auto& [name, sec] : tree) {
    const std::string prefix = "lexicon_";
    if (name.rfind(prefix, 0) != 0)
      continue;
    LexiconSource src;
    src.name = name.substr(prefix.size());
    if (src.name.empty())
      throw Error(Errc::config_error, "[" + name + "]: lexicon needs a name");
    auto format = io::to_lower(io::trim(sec.get<std::string>("format", "wordlist")));
    if (format == "wordlist") {
      src.format = LexiconSource::Format::wordlist;
      auto pos = sec.get_optional<std::string>("positive");
      auto neg = sec.get_optional<std::string>("negative");
      if (!pos || !neg)
        throw Error(Errc::config_error, "[" + name + "]: wordlist lexicon needs positive and negative");
      src.positive = resolve(base, *pos);
      src.negative = resolve(base, *neg);
    } else if (format == "mpqa") {
      src.format = LexiconSource::Format::mpqa;
      auto p = sec.get_optional<std::string>("path");
      if (!p)
        throw Error(Errc::config_error, "[" + name + "]: mpqa lexicon needs path");
      src.path = resolve(base, *p);
    } else {
      throw Error(Errc::config_error, "[" + name + "] format: unknown '" + format + "'");
    }
    c.lexica.push_back(std::move(src));
  }

  const auto& neg_s = section("negation");
  c.negation.window = number<std::size_t>(neg_s, "negation", "window", c.negation.window);
  c.negation.bidirectional = boolean(neg_s, "negation", "bidirectional", c.negation.bidirectional);
  if (auto v = neg_s.get_optional<std::string>("negators")) {
    c.negation.negators.clear();
    for (const auto& w : list(*v))
      c.negation.negators.push_back(io::to_lower(w));
  }
  if (auto v = section("match").get_optional<std::string>("policy")) {
    auto p = io::to_lower(io::trim(*v));
    if (p == "ignore_pos")
      c.match_policy = sentiment::MatchPolicy::ignore_pos;
    else if (p == "strict")
      c.match_policy = sentiment::MatchPolicy::strict;
    else
      throw Error(Errc::config_error, "[match] policy: unknown '" + *v + "'");
  }

  const auto& price_s = section("prices");
  if (auto v = price_s.get_optional<std::string>("path"))
    c.prices = resolve(base, *v);
  c.market_symbol = io::to_upper(price_s.get<std::string>("market_symbol", c.market_symbol));
  c.vix_symbol = io::to_upper(price_s.get<std::string>("vix_symbol", c.vix_symbol));
  c.detrend_window = number<std::size_t>(price_s, "prices", "detrend_window", c.detrend_window);

  const auto& panel_s = section("panel");
  if (auto v = panel_s.get_optional<std::string>("suites")) {
    c.suites.clear();
    for (const auto& s : list(*v)) {
      auto suite = panel::parse_suite(s);
      if (!suite)
        throw Error(Errc::config_error, "[panel] suites: unknown '" + s + "'");
      c.suites.push_back(*suite);
    }
  }
  if (auto v = panel_s.get_optional<std::string>("covariance")) {
    auto m = panel::parse_covariance_mode(io::trim(*v));
    if (!m)
      throw Error(Errc::config_error, "[panel] covariance: unknown '" + *v + "'");
    c.covariance = *m;
  }
  if (auto v = panel_s.get_optional<std::string>("sectors"))
    c.sectors = resolve(base, *v);
  c.include_pca = boolean(panel_s, "panel", "pca", c.include_pca);
  c.lag = number<std::size_t>(panel_s, "panel", "lag", c.lag);

  const auto& sim_s = section("simulate");
  c.seed = number<std::uint64_t>(sim_s, "simulate", "seed", c.seed);
  c.sim_days = number<std::size_t>(sim_s, "simulate", "n_days", c.sim_days);
  c.n_boot = number<std::size_t>(sim_s, "simulate", "n_boot", c.n_boot);
  c.level = number<double>(sim_s, "simulate", "level", c.level);
  c.grid_points = number<std::size_t>(sim_s, "simulate", "grid_points", c.grid_points);
  c.min_active_days = number<std::size_t>(sim_s, "simulate", "min_active_days", c.min_active_days);
  if (auto v = sim_s.get_optional<std::string>("fits"))
    c.fits = resolve(base, *v);

  const auto& rep_s = section("report");
  if (auto v = rep_s.get_optional<std::string>("labels"))
    c.labels = resolve(base, *v);
  c.min_count = number<std::size_t>(rep_s, "report", "min_count", c.min_count);
  c.top_k = number<std::size_t>(rep_s, "report", "top_k", c.top_k);

  const auto& out_s = section("output");
  if (auto v = out_s.get_optional<std::string>("dir"))
    c.output_dir = resolve(base, *v);
  c.threads = number<std::size_t>(section("run"), "run", "threads", c.threads);
  return c;
}

void validate(const RunConfig& c)
{
  if (c.detrend_window < 10)
    throw Error(Errc::config_error, "detrend window must be at least 10");
  if (c.lag < 1 || c.lag > 5)
    throw Error(Errc::config_error, "lag must be in 1..5");
  if (c.negation.window < 1)
    throw Error(Errc::config_error, "negation window must be at least 1");
  if (!(c.level > 0 && c.level < 1))
    throw Error(Errc::config_error, "band level must be in (0,1)");
  if (c.min_count < 1)
    throw Error(Errc::config_error, "min_count must be at least 1");
  if (c.grid_points < 2)
    throw Error(Errc::config_error, "grid_points must be at least 2");
  std::set<std::string> names;
  for (const auto& l : c.lexica)
    if (!names.insert(l.name).second)
      throw Error(Errc::config_error, "lexicon '" + l.name + "' defined twice");
}

std::string canonical_config(const RunConfig& c)
{
  std::string s;
  auto kv = [&](const std::string& k, const std::string& v) { s += k + "=" + v + "\n"; };
  kv("corpus", c.corpus.filename().string());
  kv("corpus_format", c.corpus_format == corpus::CorpusFormat::jsonl ? "jsonl" : "directory");
  kv("calendar", c.calendar.filename().string());
  kv("utc_shift_minutes", std::to_string(c.utc_shift_minutes));
  std::string syms;
  for (const auto& x : c.symbols)
    syms += x + ",";
  kv("symbols", syms);
  for (const auto& l : c.lexica) {
    kv("lexicon", l.name + (l.format == LexiconSource::Format::mpqa ? ":mpqa:" + l.path.filename().string()
                                                                    : ":wordlist:" + l.positive.filename().string() +
                                                                          ":" + l.negative.filename().string()));
  }
  kv("negation_window", std::to_string(c.negation.window));
  kv("negation_bidirectional", c.negation.bidirectional ? "1" : "0");
  std::string negs;
  for (const auto& x : c.negation.negators)
    negs += x + ",";
  kv("negators", negs);
  kv("match_policy", c.match_policy == sentiment::MatchPolicy::strict ? "strict" : "ignore_pos");
  kv("prices", c.prices.filename().string());
  kv("market_symbol", c.market_symbol);
  kv("vix_symbol", c.vix_symbol);
  kv("detrend_window", std::to_string(c.detrend_window));
  std::string suites;
  for (auto x : c.suites)
    suites += std::string(panel::to_string(x)) + ",";
  kv("suites", suites);
  kv("covariance", std::string(panel::to_string(c.covariance)));
  kv("sectors", c.sectors.filename().string());
  kv("pca", c.include_pca ? "1" : "0");
  kv("lag", std::to_string(c.lag));
  kv("seed", std::to_string(c.seed));
  kv("sim_days", std::to_string(c.sim_days));
  kv("n_boot", std::to_string(c.n_boot));
  kv("level", io::format_double(c.level));
  kv("grid_points", std::to_string(c.grid_points));
  kv("min_active_days", std::to_string(c.min_active_days));
  kv("labels", c.labels.filename().string());
  kv("min_count", std::to_string(c.min_count));
  kv("top_k", std::to_string(c.top_k));
  return s;
}

std::size_t effective_threads(std::size_t requested)
{
  std::size_t n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (const char* env = std::getenv("NEWSFLOW_THREADS")) {
    if (auto cap = io::parse_int(env); cap && *cap >= 1)
      n = std::min(n, static_cast<std::size_t>(*cap));
  }
  return std::max<std::size_t>(n, 1);
}

} // namespace newsflow::cli
