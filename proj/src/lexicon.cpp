#include "newsflow/lexicon.hpp"

#include "newsflow/error.hpp"
#include "newsflow/porter.hpp"
#include "newsflow/text_io.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace newsflow::lexicon {

std::string_view to_string(Polarity p) noexcept
{
  switch (p) {
  case Polarity::positive: return "positive";
  case Polarity::negative: return "negative";
  case Polarity::neutral: return "neutral";
  case Polarity::both: return "both";
  }
  return "neutral";
}

std::string_view to_string(PosTag t) noexcept
{
  switch (t) {
  case PosTag::adj: return "adj";
  case PosTag::noun: return "noun";
  case PosTag::verb: return "verb";
  case PosTag::adverb: return "adverb";
  case PosTag::anypos: return "anypos";
  case PosTag::unconstrained: return "unconstrained";
  }
  return "unconstrained";
}

std::string_view to_string(Strength s) noexcept
{
  switch (s) {
  case Strength::strongsubj: return "strongsubj";
  case Strength::weaksubj: return "weaksubj";
  case Strength::unspecified: return "unspecified";
  }
  return "unspecified";
}

namespace {

[[noreturn]] void invalid(std::string_view key, std::string_view value)
{
  throw Error(Errc::invalid_value, "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key)
{
  auto it = kv.find(key);
  if (it == kv.end())
    throw Error(Errc::missing_field, "missing field '" + key + "'");
  return it->second;
}

std::string stem_phrase(std::string_view phrase)
{
  std::string key;
  for (const auto& w : io::split(phrase, ' ')) {
    if (!key.empty())
      key += ' ';
    key += sentiment::porter_stem(w);
  }
  return key;
}

} // namespace

LexiconEntry parse_mpqa_line(std::string_view line, MpqaParseStats* stats)
{
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(Errc::invalid_value, "token '" + token + "' is not key=value");
    kv.emplace(token.substr(0, eq), token.substr(eq + 1));
  }

  LexiconEntry entry;
  const auto& type = require(kv, "type");
  if (type == "strongsubj")
    entry.strength = Strength::strongsubj;
  else if (type == "weaksubj")
    entry.strength = Strength::weaksubj;
  else
    invalid("type", type);

  const auto& len_text = require(kv, "len");
  auto len = io::parse_int(len_text);
  if (!len || *len < 1)
    invalid("len", len_text);
  entry.length = static_cast<std::size_t>(*len);

  std::set<std::string> known{"type", "len", "pos1", "stemmed1", "priorpolarity"};
  for (std::size_t i = 1; i <= entry.length; ++i) {
    std::string key = "word" + std::to_string(i);
    known.insert(key);
    const auto& w = require(kv, key);
    if (w.empty())
      invalid(key, w);
    if (!entry.word.empty())
      entry.word += ' ';
    entry.word += io::to_lower(w);
  }

  const auto& pos = require(kv, "pos1");
  if (pos == "adj")
    entry.pos_tag = PosTag::adj;
  else if (pos == "noun")
    entry.pos_tag = PosTag::noun;
  else if (pos == "verb")
    entry.pos_tag = PosTag::verb;
  else if (pos == "adverb")
    entry.pos_tag = PosTag::adverb;
  else if (pos == "anypos")
    entry.pos_tag = PosTag::anypos;
  else
    invalid("pos1", pos);

  const auto& stemmed = require(kv, "stemmed1");
  if (stemmed == "y")
    entry.stemmed = true;
  else if (stemmed == "n")
    entry.stemmed = false;
  else
    invalid("stemmed1", stemmed);

  const auto& pol = require(kv, "priorpolarity");
  if (pol == "positive")
    entry.polarity = Polarity::positive;
  else if (pol == "negative")
    entry.polarity = Polarity::negative;
  else if (pol == "neutral")
    entry.polarity = Polarity::neutral;
  else if (pol == "both")
    entry.polarity = Polarity::both;
  else
    invalid("priorpolarity", pol);

  if (stats)
    for (const auto& [key, value] : kv)
      if (!known.count(key))
        ++stats->unknown_keys;
  return entry;
}

std::string format_mpqa_line(const LexiconEntry& entry)
{
  std::string out = "type=";
  out += entry.strength == Strength::strongsubj ? "strongsubj" : "weaksubj";
  out += " len=" + std::to_string(entry.length);
  auto words = io::split(entry.word, ' ');
  for (std::size_t i = 0; i < words.size(); ++i)
    out += " word" + std::to_string(i + 1) + "=" + words[i];
  PosTag tag = entry.pos_tag == PosTag::unconstrained ? PosTag::anypos : entry.pos_tag;
  out += " pos1=" + std::string(to_string(tag));
  out += entry.stemmed ? " stemmed1=y" : " stemmed1=n";
  out += " priorpolarity=" + std::string(to_string(entry.polarity));
  return out;
}

std::vector<LexiconEntry> load_mpqa(const std::filesystem::path& path, MpqaParseStats* stats)
{
  if (!std::filesystem::exists(path))
    throw Error(Errc::lexicon_not_found, "lexicon file not found: " + path.string());
  MpqaParseStats local;
  std::vector<LexiconEntry> entries;
  std::set<std::tuple<std::string, PosTag, bool>> seen;
  auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = io::trim(lines[i]);
    if (line.empty() || line.front() == '#')
      continue;
    LexiconEntry entry;
    try {
      entry = parse_mpqa_line(line, &local);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
    if (!seen.emplace(entry.word, entry.pos_tag, entry.stemmed).second) {
      ++local.duplicates;
      continue;
    }
    entries.push_back(std::move(entry));
  }
  if (entries.empty())
    throw Error(Errc::empty_list, "lexicon file has no entries: " + path.string());
  if (stats) {
    stats->unknown_keys += local.unknown_keys;
    stats->duplicates += local.duplicates;
  }
  return entries;
}

std::vector<LexiconEntry> load_wordlist(const std::filesystem::path& path, Polarity polarity)
{
  if (!std::filesystem::exists(path))
    throw Error(Errc::lexicon_not_found, "lexicon file not found: " + path.string());
  std::vector<LexiconEntry> entries;
  std::set<std::string> seen;
  for (const auto& raw : io::read_lines(path)) {
    auto line = io::trim(raw);
    if (line.empty() || line.front() == ';')
      continue;
    auto word = io::to_lower(line);
    if (!seen.insert(word).second)
      continue;
    LexiconEntry entry;
    entry.word = word;
    entry.polarity = polarity;
    entry.length = static_cast<std::size_t>(std::count(word.begin(), word.end(), ' ')) + 1;
    entries.push_back(std::move(entry));
  }
  if (entries.empty())
    throw Error(Errc::empty_list, "word list is empty: " + path.string());
  return entries;
}

Lexicon::Lexicon(std::string name, std::vector<LexiconEntry> entries)
    : name_(std::move(name)), entries_(std::move(entries))
{
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.stemmed)
      stemmed_[stem_phrase(e.word)].push_back(i);
    else
      unstemmed_[e.word].push_back(i);
    if (e.scoring())
      ++scoring_count_;
    max_length_ = std::max(max_length_, e.length);
  }
}

const std::vector<std::size_t>* Lexicon::find_unstemmed(std::string_view phrase) const
{
  auto it = unstemmed_.find(std::string(phrase));
  return it == unstemmed_.end() ? nullptr : &it->second;
}

const std::vector<std::size_t>* Lexicon::find_stem_key(std::string_view stem_key) const
{
  auto it = stemmed_.find(std::string(stem_key));
  return it == stemmed_.end() ? nullptr : &it->second;
}

const std::vector<std::size_t>* Lexicon::find_stemmed(std::string_view phrase) const
{
  return find_stem_key(stem_phrase(phrase));
}

std::set<std::string> Lexicon::words(Polarity polarity) const
{
  std::set<std::string> out;
  for (const auto& e : entries_)
    if (e.scoring() && e.polarity == polarity)
      out.insert(e.word);
  return out;
}

Lexicon build_lexicon(std::string name, std::vector<LexiconEntry> entries)
{
  if (entries.empty())
    throw Error(Errc::empty_list, "lexicon '" + name + "' has no entries");
  return Lexicon(std::move(name), std::move(entries));
}

namespace {

std::size_t frequency(const WordCounts& freq, const std::string& word)
{
  auto it = freq.find(word);
  return it == freq.end() ? 0 : it->second;
}

void order_by_frequency(std::vector<std::string>& words, const WordCounts& freq)
{
  std::sort(words.begin(), words.end(), [&](const std::string& x, const std::string& y) {
    auto fx = frequency(freq, x), fy = frequency(freq, y);
    return fx != fy ? fx > fy : x < y;
  });
}

PolarityComparison compare_sets(const std::set<std::string>& a, const std::set<std::string>& b,
                                const WordCounts& freq, std::size_t min_count)
{
  PolarityComparison out;
  for (const auto& w : a) {
    if (frequency(freq, w) < min_count)
      continue;
    (b.count(w) ? out.shared : out.unique_to_a).push_back(w);
  }
  for (const auto& w : b)
    if (frequency(freq, w) >= min_count && !a.count(w))
      out.unique_to_b.push_back(w);
  order_by_frequency(out.unique_to_a, freq);
  order_by_frequency(out.unique_to_b, freq);
  order_by_frequency(out.shared, freq);
  return out;
}

} // namespace

ComparisonReport compare_lexica(const Lexicon& a, const Lexicon& b, const WordCounts& corpus_freq,
                                std::size_t min_count)
{
  if (min_count < 1)
    throw Error(Errc::invalid_value, "min_count must be at least 1");
  ComparisonReport report;
  report.a_name = a.name();
  report.b_name = b.name();
  report.positive = compare_sets(a.words(Polarity::positive), b.words(Polarity::positive), corpus_freq, min_count);
  report.negative = compare_sets(a.words(Polarity::negative), b.words(Polarity::negative), corpus_freq, min_count);
  return report;
}

MembershipTable partition_by_membership(const std::vector<const Lexicon*>& lexica,
                                        const WordCounts& corpus_freq, std::size_t min_count)
{
  if (min_count < 1)
    throw Error(Errc::invalid_value, "min_count must be at least 1");
  if (lexica.size() > 31)
    throw Error(Errc::invalid_value, "too many lexica for a membership table");
  MembershipTable table;
  for (auto polarity : {Polarity::positive, Polarity::negative}) {
    std::map<std::string, unsigned> mask;
    for (std::size_t i = 0; i < lexica.size(); ++i)
      for (const auto& w : lexica[i]->words(polarity))
        mask[w] |= 1u << i;
    auto& target = polarity == Polarity::positive ? table.positive : table.negative;
    for (const auto& [word, bits] : mask)
      if (frequency(corpus_freq, word) >= min_count)
        target[bits].push_back(word);
    for (auto& [bits, words] : target)
      order_by_frequency(words, corpus_freq);
  }
  return table;
}

} // namespace newsflow::lexicon
