#pragma once

#include "newsflow/corpus.hpp"
#include "newsflow/lexicon.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// Tokenization, lexicon projection with negation handling, and per
/// symbol-day sentiment variables.
namespace newsflow::sentiment {

struct Token {
  std::string text;        ///< lowercase
  std::size_t offset = 0;  ///< byte offset in the source text
  bool operator==(const Token&) const = default;
};

struct TokenizedArticle {
  std::vector<std::vector<Token>> sentences;
  std::size_t word_count = 0;
};

/// Splits sentences on . ! ? (guarding common abbreviations, initials and
/// decimals) and on blank lines. Word tokens are maximal runs of letters and
/// apostrophes, lowercased, with a trailing "n't" split off. Digits and
/// punctuation are dropped. Throws Error(empty_text) for empty input.
TokenizedArticle tokenize(std::string_view text);

struct NegationConfig {
  std::size_t window = 5;
  std::vector<std::string> negators{"not", "never", "no", "neither", "nor", "none", "n't"};
  /// Also look for negators after the sentiment word.
  bool bidirectional = true;
};

/// Hook for part-of-speech confirmation in strict matching mode.
class PosTagger {
public:
  virtual ~PosTagger() = default;
  /// One tag per token of the sentence.
  virtual std::vector<lexicon::PosTag> tag(std::span<const Token> sentence) const = 0;
};

enum class MatchPolicy {
  ignore_pos, ///< an entry matches whatever the token's part of speech
  strict,     ///< only anypos/unconstrained entries, or entries the tagger confirms
};

struct MatchOptions {
  MatchPolicy policy = MatchPolicy::ignore_pos;
  const PosTagger* tagger = nullptr;
};

struct ArticleScore {
  std::string article_id;
  std::string lexicon_name;
  std::size_t pos_count = 0;
  std::size_t neg_count = 0;
  std::size_t word_count = 1;
  double pos_prop = 0.0;
  double neg_prop = 0.0;
};

/// One lexicon match inside an article.
struct TokenClaim {
  std::size_t sentence = 0;
  std::size_t first = 0;  ///< token index within the sentence
  std::size_t length = 1; ///< tokens covered
  int pass = 1;           ///< 1 = literal match, 2 = stem match
  std::size_t entry = 0;  ///< index into Lexicon::entries()
  lexicon::Polarity prior = lexicon::Polarity::positive;
  bool negated = false;
};

struct ScoreTrace {
  std::vector<TokenClaim> claims;
};

/// Pass 1 matches unstemmed entries against the raw tokens; pass 2 stems
/// the tokens still unclaimed and matches stemmed entries. A negator within
/// `window` tokens in the same sentence flips the polarity once.
/// Throws Error(empty_text) when the article has no word tokens.
ArticleScore score_article(const TokenizedArticle& article, const lexicon::Lexicon& lex,
                           const NegationConfig& negation = {}, const MatchOptions& match = {},
                           ScoreTrace* trace = nullptr);

/// positive, negative or neutral by comparing the two proportions.
lexicon::Polarity classify_article(const ArticleScore& score);

struct SentimentRecord {
  std::string symbol;
  std::size_t day = 0;
  std::string lexicon_name;
  bool active = false; ///< I: at least one article
  double pos = 0.0;
  double neg = 0.0;
  std::size_t n_articles = 0;

  bool operator==(const SentimentRecord&) const = default;
};

SentimentRecord aggregate_daily(std::span<const ArticleScore> scores, std::string symbol, std::size_t day,
                                std::string lexicon_name = {});

/// Pools articles published on days t..t+h-1. `records[d]` must be the
/// record of day d for one symbol. Throws Error(window_out_of_range).
SentimentRecord cumulative_record(std::span<const SentimentRecord> records, std::size_t t, std::size_t h);

struct VariableSummary {
  double mean = 0, sd = 0, max = 0, q1 = 0, q2 = 0, q3 = 0;
  /// Share of records where this variable strictly exceeds the other.
  double polarity_share = 0;
};

struct SummaryStats {
  std::size_t n_active = 0;
  VariableSummary pos;
  VariableSummary neg;
};

/// Statistics over active records only. Throws Error(no_active_records).
SummaryStats sentiment_summary(std::span<const SentimentRecord> records);

struct MonthlyCorrelation {
  std::string lexicon_a;
  std::string lexicon_b;
  std::string month; ///< "YYYY-MM"
  std::size_t n = 0;
  std::optional<double> pos;
  std::optional<double> neg;
};

/// Pearson correlations between each pair of lexica over symbol-days active
/// under both, per calendar month. Months with fewer than two joint
/// observations (or a constant series) yield nullopt.
std::vector<MonthlyCorrelation> monthly_lexicon_correlation(
    const std::map<std::string, std::vector<SentimentRecord>>& by_lexicon,
    const corpus::TradingCalendar& calendar);

lexicon::WordCounts word_frequencies(std::span<const TokenizedArticle> articles);

/// Scores every assigned article under every lexicon and aggregates one
/// record per (symbol, day) for all `symbols` and all calendar days. Articles
/// without word tokens are skipped and counted in `skipped`. Work is split
/// over `threads` workers; the result does not depend on the thread count.
struct DistillResult {
  std::map<std::string, std::vector<SentimentRecord>> records; ///< by lexicon, symbol-major then day
  std::map<std::string, std::vector<ArticleScore>> scores;     ///< by lexicon, in article order
  std::size_t skipped = 0;
};
DistillResult distill(const corpus::ArticleSet& assigned, std::span<const lexicon::Lexicon> lexica,
                      const std::vector<std::string>& symbols, std::size_t n_days,
                      const NegationConfig& negation = {}, const MatchOptions& match = {},
                      std::size_t threads = 1);

/// CSV: symbol,date,lexicon,I,pos,neg,n_articles
std::string format_sentiment_csv(const std::map<std::string, std::vector<SentimentRecord>>& records,
                                 const corpus::TradingCalendar& calendar);
std::map<std::string, std::vector<SentimentRecord>> read_sentiment_csv(const std::filesystem::path& path,
                                                                       const corpus::TradingCalendar& calendar);

} // namespace newsflow::sentiment
