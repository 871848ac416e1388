#include "newsflow/corpus.hpp"

#include "newsflow/error.hpp"
#include "newsflow/text_io.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace newsflow::corpus {

using namespace std::chrono;
using nlohmann::ordered_json;

namespace {

bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out)
{
  if (pos + count > s.size())
    return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9')
      return false;
    value = value * 10 + (s[i] - '0');
  }
  out = value;
  return true;
}

std::optional<Date> parse_date_prefix(std::string_view s)
{
  int y = 0, m = 0, d = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-')
    return std::nullopt;
  if (!read_digits(s, 0, 4, y) || !read_digits(s, 5, 2, m) || !read_digits(s, 8, 2, d))
    return std::nullopt;
  Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!date.ok())
    return std::nullopt;
  return date;
}

std::string upper_symbol(std::string_view s)
{
  return io::to_upper(io::trim(s));
}

} // namespace

std::optional<Date> parse_date(std::string_view text)
{
  text = io::trim(text);
  if (text.size() != 10)
    return std::nullopt;
  return parse_date_prefix(text);
}

std::string format_date(Date date)
{
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text)
{
  text = io::trim(text);
  auto date = parse_date_prefix(text);
  if (!date)
    return std::nullopt;
  Timestamp ts = sys_days{*date};
  if (text.size() == 10)
    return ts;
  if (text[10] != 'T' && text[10] != 't' && text[10] != ' ')
    return std::nullopt;

  int hh = 0, mm = 0, ss = 0;
  std::size_t pos = 11;
  if (text.size() < pos + 5 || !read_digits(text, pos, 2, hh) || text[pos + 2] != ':' ||
      !read_digits(text, pos + 3, 2, mm))
    return std::nullopt;
  pos += 5;
  if (pos < text.size() && text[pos] == ':') {
    if (!read_digits(text, pos + 1, 2, ss))
      return std::nullopt;
    pos += 3;
    if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
        ++pos;
      if (pos == start)
        return std::nullopt;
    }
  }
  if (hh > 23 || mm > 59 || ss > 60)
    return std::nullopt;
  ts += hours{hh} + minutes{mm} + seconds{ss};

  std::string_view zone = text.substr(pos);
  if (zone.empty() || zone == "Z" || zone == "z")
    return ts;
  if ((zone[0] == '+' || zone[0] == '-') && (zone.size() == 6 || zone.size() == 5 || zone.size() == 3)) {
    int oh = 0, om = 0;
    if (!read_digits(zone, 1, 2, oh))
      return std::nullopt;
    if (zone.size() == 6) {
      if (zone[3] != ':' || !read_digits(zone, 4, 2, om))
        return std::nullopt;
    } else if (zone.size() == 5) {
      if (!read_digits(zone, 3, 2, om))
        return std::nullopt;
    }
    auto offset = hours{oh} + minutes{om};
    // local = UTC + offset
    return zone[0] == '+' ? ts - offset : ts + offset;
  }
  return std::nullopt;
}

std::string format_timestamp(Timestamp ts)
{
  auto day_point = floor<days>(ts);
  Date date{day_point};
  hh_mm_ss<seconds> tod{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(date).c_str(),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

TradingCalendar::TradingCalendar(std::vector<Date> days) : days_(std::move(days))
{
  for (std::size_t i = 0; i < days_.size(); ++i) {
    if (!days_[i].ok())
      throw Error(Errc::invalid_value, "invalid calendar date at position " + std::to_string(i));
    if (i > 0 && sys_days{days_[i]} <= sys_days{days_[i - 1]})
      throw Error(Errc::invalid_value,
                  "calendar not strictly increasing at " + format_date(days_[i]));
    index_.emplace(sys_days{days_[i]}, i);
  }
}

TradingCalendar TradingCalendar::load(const std::filesystem::path& path)
{
  std::vector<Date> days;
  auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = io::trim(lines[i]);
    if (line.empty() || line.front() == '#')
      continue;
    auto date = parse_date(line);
    if (!date)
      throw Error(Errc::malformed_record,
                  path.string() + ":" + std::to_string(i + 1) + ": invalid date '" + std::string(line) + "'");
    days.push_back(*date);
  }
  return TradingCalendar(std::move(days));
}

std::optional<std::size_t> TradingCalendar::index_of(Date date) const
{
  auto it = index_.find(sys_days{date});
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view name)
{
  if (name == "jsonl")
    return CorpusFormat::jsonl;
  if (name == "directory" || name == "directory_of_text_files" || name == "dir")
    return CorpusFormat::directory_of_text_files;
  return std::nullopt;
}

namespace {

[[noreturn]] void malformed(std::string_view where, const std::string& what)
{
  throw Error(Errc::malformed_record, std::string(where) + ": " + what);
}

std::string required_string(const ordered_json& obj, const char* key, std::string_view where)
{
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null())
    malformed(where, std::string("missing field '") + key + "'");
  if (!it->is_string())
    malformed(where, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

/// Fills everything but `body` from a metadata object.
Article article_from_metadata(const ordered_json& obj, std::string_view where, bool need_id)
{
  if (!obj.is_object())
    malformed(where, "record is not a JSON object");
  Article art;
  if (need_id || obj.contains("id")) {
    art.id = required_string(obj, "id", where);
    if (art.id.empty())
      malformed(where, "field 'id' is empty");
  }
  auto stamp = required_string(obj, "published_at", where);
  auto ts = parse_timestamp(stamp);
  if (!ts)
    malformed(where, "field 'published_at' is not ISO-8601: '" + stamp + "'");
  art.published_at = *ts;

  auto sym = obj.find("symbols");
  if (sym == obj.end() || sym->is_null())
    malformed(where, "missing field 'symbols'");
  if (!sym->is_array())
    malformed(where, "field 'symbols' must be an array");
  for (const auto& s : *sym) {
    if (!s.is_string())
      malformed(where, "field 'symbols' must contain strings");
    art.symbols.push_back(s.get<std::string>());
  }
  art.title = required_string(obj, "title", where);
  auto contrib = obj.find("contributor");
  if (contrib != obj.end() && !contrib->is_null()) {
    if (!contrib->is_string())
      malformed(where, "field 'contributor' must be a string or null");
    art.contributor = contrib->get<std::string>();
  }
  return art;
}

void check_unique_and_nonempty(const std::vector<Article>& articles)
{
  if (articles.empty())
    throw Error(Errc::empty_corpus, "corpus contains no articles");
  std::set<std::string> seen;
  for (const auto& a : articles)
    if (!seen.insert(a.id).second)
      throw Error(Errc::duplicate_id, "duplicate article id '" + a.id + "'");
}

} // namespace

Article parse_article_json(std::string_view line, std::string_view where)
{
  ordered_json obj;
  try {
    obj = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(where, std::string("invalid JSON: ") + e.what());
  }
  Article art = article_from_metadata(obj, where, true);
  art.body = required_string(obj, "body", where);
  if (art.body.empty())
    malformed(where, "field 'body' is empty");
  return art;
}

ArticleSet load_articles(const std::filesystem::path& path, CorpusFormat format)
{
  if (!std::filesystem::exists(path))
    throw Error(Errc::missing_input, "corpus path does not exist: " + path.string());
  ArticleSet set;
  if (format == CorpusFormat::jsonl) {
    auto lines = io::read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (io::trim(lines[i]).empty())
        continue;
      set.articles.push_back(parse_article_json(lines[i], "line " + std::to_string(i + 1)));
    }
  } else {
    std::vector<std::filesystem::path> texts;
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        texts.push_back(entry.path());
    std::sort(texts.begin(), texts.end());
    for (const auto& text : texts) {
      auto sidecar = text;
      sidecar.replace_extension(".json");
      std::string where = text.filename().string();
      if (!std::filesystem::exists(sidecar))
        malformed(where, "missing metadata sidecar " + sidecar.filename().string());
      ordered_json obj;
      try {
        obj = ordered_json::parse(io::read_file(sidecar));
      } catch (const nlohmann::json::parse_error& e) {
        malformed(sidecar.filename().string(), std::string("invalid JSON: ") + e.what());
      }
      Article art = article_from_metadata(obj, sidecar.filename().string(), false);
      if (art.id.empty())
        art.id = text.stem().string();
      art.body = io::read_file(text);
      if (io::trim(art.body).empty())
        malformed(where, "article body is empty");
      set.articles.push_back(std::move(art));
    }
  }
  check_unique_and_nonempty(set.articles);
  return set;
}

std::string serialize_jsonl(const ArticleSet& set)
{
  std::string out;
  for (const auto& a : set.articles) {
    ordered_json obj;
    obj["id"] = a.id;
    obj["published_at"] = format_timestamp(a.published_at);
    obj["symbols"] = a.symbols;
    obj["title"] = a.title;
    obj["body"] = a.body;
    obj["contributor"] = a.contributor ? ordered_json(*a.contributor) : ordered_json(nullptr);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

namespace {

void index_by_symbol_day(ArticleSet& set)
{
  set.by_symbol_day.clear();
  set.unassigned = 0;
  for (std::size_t i = 0; i < set.articles.size(); ++i) {
    if (!set.days[i]) {
      ++set.unassigned;
      continue;
    }
    std::set<std::string> symbols;
    for (const auto& s : set.articles[i].symbols)
      symbols.insert(upper_symbol(s));
    for (const auto& s : symbols)
      set.by_symbol_day[SymbolDay{s, *set.days[i]}].push_back(set.articles[i].id);
  }
}

} // namespace

ArticleSet assign_trading_days(const ArticleSet& set, const TradingCalendar& cal, DayBoundary boundary)
{
  if (cal.empty())
    throw Error(Errc::calendar_mismatch, "trading calendar is empty");
  std::vector<Timestamp> opens;
  opens.reserve(cal.size() + 1);
  for (const auto& d : cal.days())
    opens.push_back(Timestamp{sys_days{d}} + boundary.utc_shift);
  // the last day's window closes at the next calendar midnight
  Timestamp last_close = Timestamp{sys_days{cal.days().back()} + days{1}} + boundary.utc_shift;

  ArticleSet out;
  out.articles = set.articles;
  out.days.resize(out.articles.size());
  for (std::size_t i = 0; i < out.articles.size(); ++i) {
    auto ts = out.articles[i].published_at;
    if (ts < opens.front() || ts >= last_close)
      continue;
    auto it = std::upper_bound(opens.begin(), opens.end(), ts);
    out.days[i] = static_cast<std::size_t>(std::distance(opens.begin(), it)) - 1;
  }
  index_by_symbol_day(out);
  return out;
}

ArticleSet filter_by_symbols(const ArticleSet& set, const std::set<std::string>& symbols)
{
  std::set<std::string> wanted;
  for (const auto& s : symbols)
    wanted.insert(upper_symbol(s));

  ArticleSet out;
  bool assigned = set.days.size() == set.articles.size();
  for (std::size_t i = 0; i < set.articles.size(); ++i) {
    const auto& art = set.articles[i];
    bool keep = std::any_of(art.symbols.begin(), art.symbols.end(),
                            [&](const std::string& s) { return wanted.count(upper_symbol(s)) > 0; });
    if (!keep)
      continue;
    out.articles.push_back(art);
    if (assigned)
      out.days.push_back(set.days[i]);
  }
  if (assigned && !out.articles.empty())
    index_by_symbol_day(out);
  return out;
}

std::map<std::string, std::size_t> active_days_per_symbol(const ArticleSet& set)
{
  std::map<std::string, std::size_t> counts;
  for (const auto& [key, ids] : set.by_symbol_day)
    ++counts[key.symbol];
  return counts;
}

} // namespace newsflow::corpus
