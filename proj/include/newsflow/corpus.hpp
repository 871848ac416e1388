#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// Article corpus ingestion, the trading calendar, and day alignment.
namespace newsflow::corpus {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::year_month_day;

/// Accepts "YYYY-MM-DD" (midnight UTC) or "YYYY-MM-DDTHH:MM[:SS[.frac]]"
/// followed by "Z", "+hh:mm", "-hh:mm" or nothing (UTC). A space may
/// replace the 'T'.
std::optional<Timestamp> parse_timestamp(std::string_view text);
/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp ts);
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

struct Article {
  std::string id;
  Timestamp published_at;
  std::vector<std::string> symbols;
  std::string title;
  std::string body;
  std::optional<std::string> contributor;

  bool operator==(const Article&) const = default;
};

class TradingCalendar {
public:
  TradingCalendar() = default;
  /// Throws Error(invalid_value) unless `days` is strictly increasing.
  explicit TradingCalendar(std::vector<Date> days);

  /// One ISO-8601 date per line; blank lines and '#' comments skipped.
  static TradingCalendar load(const std::filesystem::path& path);

  std::size_t size() const noexcept { return days_.size(); }
  bool empty() const noexcept { return days_.empty(); }
  const Date& day(std::size_t t) const { return days_.at(t); }
  std::span<const Date> days() const noexcept { return days_; }
  std::optional<std::size_t> index_of(Date date) const;

  bool operator==(const TradingCalendar& other) const { return days_ == other.days_; }

private:
  std::vector<Date> days_;
  std::map<std::chrono::sys_days, std::size_t> index_;
};

/// Where one trading day ends and the next begins. A day's session window
/// opens at midnight UTC of its date shifted by `utc_shift`; e.g. +5h puts
/// the boundary at local midnight in UTC-5.
struct DayBoundary {
  std::chrono::minutes utc_shift{0};
};

struct SymbolDay {
  std::string symbol; ///< upper-cased ticker
  std::size_t day = 0;

  auto operator<=>(const SymbolDay&) const = default;
};

/// Articles plus their trading-day assignment. `days` is empty until
/// assign_trading_days runs; afterwards it is parallel to `articles` and
/// holds nullopt for articles outside the calendar.
struct ArticleSet {
  std::vector<Article> articles;
  std::vector<std::optional<std::size_t>> days;
  std::map<SymbolDay, std::vector<std::string>> by_symbol_day;
  std::size_t unassigned = 0;

  bool assigned() const noexcept { return days.size() == articles.size() && !articles.empty(); }
  bool operator==(const ArticleSet&) const = default;
};

enum class CorpusFormat { jsonl, directory_of_text_files };

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);

/// Loads articles from a JSON-lines file or a directory of `<name>.txt`
/// bodies each paired with a `<name>.json` metadata sidecar. Throws
/// Error(malformed_record | duplicate_id | empty_corpus | missing_input | io_error).
ArticleSet load_articles(const std::filesystem::path& path, CorpusFormat format);

/// Parses one jsonl record; `where` prefixes error messages.
Article parse_article_json(std::string_view line, std::string_view where);
std::string serialize_jsonl(const ArticleSet& set);

ArticleSet assign_trading_days(const ArticleSet& set, const TradingCalendar& cal,
                               DayBoundary boundary = {});

/// Keeps the articles mentioning at least one of `symbols` (case-insensitive).
ArticleSet filter_by_symbols(const ArticleSet& set, const std::set<std::string>& symbols);

/// Number of distinct assigned trading days per symbol.
std::map<std::string, std::size_t> active_days_per_symbol(const ArticleSet& set);

} // namespace newsflow::corpus
