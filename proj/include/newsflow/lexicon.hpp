#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

/// Sentiment lexica: flat positive/negative word lists and structured
/// subjectivity entries (`type=... len=... word1=... pos1=... stemmed1=...
/// priorpolarity=...`).
namespace newsflow::lexicon {

enum class Polarity { positive, negative, neutral, both };
enum class PosTag { adj, noun, verb, adverb, anypos, unconstrained };
enum class Strength { strongsubj, weaksubj, unspecified };

std::string_view to_string(Polarity p) noexcept;
std::string_view to_string(PosTag t) noexcept;
std::string_view to_string(Strength s) noexcept;

struct LexiconEntry {
  std::string word; ///< lowercase; words of a multiword entry joined by one space
  Polarity polarity = Polarity::neutral;
  bool stemmed = false;
  PosTag pos_tag = PosTag::unconstrained;
  Strength strength = Strength::unspecified;
  std::size_t length = 1;

  /// Only positive and negative entries take part in scoring.
  bool scoring() const noexcept { return polarity == Polarity::positive || polarity == Polarity::negative; }
  bool operator==(const LexiconEntry&) const = default;
};

struct MpqaParseStats {
  std::size_t unknown_keys = 0;
  std::size_t duplicates = 0;
};

/// Throws Error(missing_field) naming the key, or Error(invalid_value).
LexiconEntry parse_mpqa_line(std::string_view line, MpqaParseStats* stats = nullptr);
std::string format_mpqa_line(const LexiconEntry& entry);

/// One entry per non-blank line. Repeated (word, pos_tag, stemmed) keys keep
/// the first occurrence and are counted in `stats->duplicates`.
std::vector<LexiconEntry> load_mpqa(const std::filesystem::path& path, MpqaParseStats* stats = nullptr);

/// One word per line, ';' comments skipped; lowercased and deduplicated.
/// Throws Error(empty_list) when nothing remains.
std::vector<LexiconEntry> load_wordlist(const std::filesystem::path& path, Polarity polarity);

class Lexicon {
public:
  using Index = std::unordered_map<std::string, std::vector<std::size_t>>;

  Lexicon() = default;
  Lexicon(std::string name, std::vector<LexiconEntry> entries);

  const std::string& name() const noexcept { return name_; }
  const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
  /// Unstemmed entries keyed by their literal word (phrase).
  const Index& unstemmed_index() const noexcept { return unstemmed_; }
  /// Stemmed entries keyed by the Porter stem of each of their words.
  const Index& stemmed_index() const noexcept { return stemmed_; }

  const std::vector<std::size_t>* find_unstemmed(std::string_view phrase) const;
  /// Lookup by an already-stemmed key.
  const std::vector<std::size_t>* find_stem_key(std::string_view stem_key) const;
  /// Stems `phrase` word by word, then looks it up.
  const std::vector<std::size_t>* find_stemmed(std::string_view phrase) const;

  std::size_t scoring_size() const noexcept { return scoring_count_; }
  std::size_t max_length() const noexcept { return max_length_; }

  /// Words of the scoring entries with the given polarity.
  std::set<std::string> words(Polarity polarity) const;

private:
  std::string name_;
  std::vector<LexiconEntry> entries_;
  Index unstemmed_;
  Index stemmed_;
  std::size_t scoring_count_ = 0;
  std::size_t max_length_ = 1;
};

/// Throws Error(empty_list) for an empty entry list.
Lexicon build_lexicon(std::string name, std::vector<LexiconEntry> entries);

struct PolarityComparison {
  std::vector<std::string> unique_to_a;
  std::vector<std::string> unique_to_b;
  std::vector<std::string> shared;
};

struct ComparisonReport {
  std::string a_name;
  std::string b_name;
  PolarityComparison positive;
  PolarityComparison negative;
};

using WordCounts = std::map<std::string, std::size_t>;

/// Lists are restricted to words with corpus frequency >= min_count and
/// ordered by descending frequency, ties alphabetical.
ComparisonReport compare_lexica(const Lexicon& a, const Lexicon& b, const WordCounts& corpus_freq,
                                std::size_t min_count);

/// For n lexica: words grouped by the exact subset of lexica containing them
/// (bit i set = lexicon i). Same frequency filter and ordering as above.
struct MembershipTable {
  std::map<unsigned, std::vector<std::string>> positive;
  std::map<unsigned, std::vector<std::string>> negative;
};
MembershipTable partition_by_membership(const std::vector<const Lexicon*>& lexica,
                                        const WordCounts& corpus_freq, std::size_t min_count);

} // namespace newsflow::lexicon
