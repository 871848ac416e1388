#include "newsflow/sentiment.hpp"

#include "newsflow/error.hpp"
#include "newsflow/porter.hpp"
#include "newsflow/stats.hpp"
#include "newsflow/text_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <thread>

namespace newsflow::sentiment {

using lexicon::Lexicon;
using lexicon::LexiconEntry;
using lexicon::Polarity;
using lexicon::PosTag;

namespace {

std::string join(std::span<const std::string> words)
{
  std::string out;
  for (const auto& w : words) {
    if (!out.empty())
      out += ' ';
    out += w;
  }
  return out;
}

struct SentenceMatcher {
  const Lexicon& lex;
  const MatchOptions& match;
  std::span<const Token> sentence;
  std::vector<PosTag> tags; // empty unless strict with a tagger

  bool pos_ok(const LexiconEntry& e, std::size_t first) const
  {
    if (match.policy == MatchPolicy::ignore_pos)
      return true;
    if (e.pos_tag == PosTag::anypos || e.pos_tag == PosTag::unconstrained)
      return true;
    return !tags.empty() && tags[first] == e.pos_tag;
  }

  /// First scoring entry in file order that passes the POS policy.
  std::optional<std::size_t> select(const std::vector<std::size_t>* candidates, std::size_t first) const
  {
    if (!candidates)
      return std::nullopt;
    for (auto idx : *candidates) {
      const auto& e = lex.entries()[idx];
      if (e.scoring() && pos_ok(e, first))
        return idx;
    }
    return std::nullopt;
  }
};

bool is_negator(const std::string& word, const NegationConfig& cfg)
{
  return std::find(cfg.negators.begin(), cfg.negators.end(), word) != cfg.negators.end();
}

} // namespace

ArticleScore score_article(const TokenizedArticle& article, const Lexicon& lex, const NegationConfig& negation,
                           const MatchOptions& match, ScoreTrace* trace)
{
  if (article.word_count == 0)
    throw Error(Errc::empty_text, "article has no word tokens");

  ArticleScore score;
  score.lexicon_name = lex.name();
  score.word_count = article.word_count;
  std::vector<TokenClaim> claims;

  for (std::size_t s = 0; s < article.sentences.size(); ++s) {
    const auto& sentence = article.sentences[s];
    const std::size_t n = sentence.size();
    SentenceMatcher matcher{lex, match, sentence, {}};
    if (match.policy == MatchPolicy::strict && match.tagger) {
      matcher.tags = match.tagger->tag(sentence);
      if (matcher.tags.size() != n)
        throw Error(Errc::dimension_mismatch, "tagger returned wrong number of tags");
    }

    std::vector<bool> claimed(n, false);
    std::vector<std::string> words(n);
    for (std::size_t i = 0; i < n; ++i)
      words[i] = sentence[i].text;

    auto run_pass = [&](int pass, const std::vector<std::string>& keys) {
      for (std::size_t i = 0; i < n;) {
        if (claimed[i]) {
          ++i;
          continue;
        }
        std::size_t advanced = 1;
        std::size_t longest = std::min(lex.max_length(), n - i);
        for (std::size_t len = longest; len >= 1; --len) {
          bool free = true;
          for (std::size_t k = i; k < i + len; ++k)
            free = free && !claimed[k];
          if (!free)
            continue;
          auto key = join(std::span<const std::string>(keys).subspan(i, len));
          auto candidates = pass == 1 ? lex.find_unstemmed(key) : lex.find_stem_key(key);
          if (auto entry = matcher.select(candidates, i)) {
            for (std::size_t k = i; k < i + len; ++k)
              claimed[k] = true;
            claims.push_back({s, i, len, pass, *entry, lex.entries()[*entry].polarity, false});
            advanced = len;
            break;
          }
        }
        i += advanced;
      }
    };

    std::size_t before = claims.size();
    run_pass(1, words);
    std::vector<std::string> stems(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!claimed[i])
        stems[i] = porter_stem(words[i]);
    run_pass(2, stems);

    std::vector<std::size_t> negators;
    for (std::size_t i = 0; i < n; ++i)
      if (is_negator(words[i], negation))
        negators.push_back(i);
    for (std::size_t c = before; c < claims.size(); ++c) {
      auto& claim = claims[c];
      std::size_t last = claim.first + claim.length - 1;
      for (auto j : negators) {
        std::size_t dist = 0;
        if (j < claim.first)
          dist = claim.first - j;
        else if (j > last && negation.bidirectional)
          dist = j - last;
        if (dist >= 1 && dist <= negation.window) {
          claim.negated = true;
          break;
        }
      }
    }
  }

  for (const auto& claim : claims) {
    bool positive = (claim.prior == Polarity::positive) != claim.negated;
    (positive ? score.pos_count : score.neg_count) += 1;
  }
  auto wc = static_cast<double>(score.word_count);
  score.pos_prop = static_cast<double>(score.pos_count) / wc;
  score.neg_prop = static_cast<double>(score.neg_count) / wc;
  if (trace)
    trace->claims = std::move(claims);
  return score;
}

Polarity classify_article(const ArticleScore& score)
{
  if (score.pos_prop > score.neg_prop)
    return Polarity::positive;
  if (score.pos_prop < score.neg_prop)
    return Polarity::negative;
  return Polarity::neutral;
}

SentimentRecord aggregate_daily(std::span<const ArticleScore> scores, std::string symbol, std::size_t day,
                                std::string lexicon_name)
{
  SentimentRecord rec;
  rec.symbol = std::move(symbol);
  rec.day = day;
  rec.lexicon_name = !lexicon_name.empty() || scores.empty() ? std::move(lexicon_name) : scores.front().lexicon_name;
  if (scores.empty())
    return rec;
  double pos = 0.0, neg = 0.0;
  for (const auto& s : scores) {
    pos += s.pos_prop;
    neg += s.neg_prop;
  }
  auto n = static_cast<double>(scores.size());
  rec.active = true;
  rec.pos = pos / n;
  rec.neg = neg / n;
  rec.n_articles = scores.size();
  return rec;
}

SentimentRecord cumulative_record(std::span<const SentimentRecord> records, std::size_t t, std::size_t h)
{
  if (h < 1 || t + h > records.size())
    throw Error(Errc::window_out_of_range, "cumulative window [" + std::to_string(t) + ", " +
                                               std::to_string(t + h) + ") outside " +
                                               std::to_string(records.size()) + " days");
  if (h == 1)
    return records[t];
  SentimentRecord out;
  out.symbol = records[t].symbol;
  out.day = t;
  out.lexicon_name = records[t].lexicon_name;
  double pos = 0.0, neg = 0.0;
  std::size_t n = 0;
  for (std::size_t d = t; d < t + h; ++d) {
    const auto& r = records[d];
    if (!r.active)
      continue;
    // records without an article count still pool as one article
    std::size_t w = r.n_articles > 0 ? r.n_articles : 1;
    pos += static_cast<double>(w) * r.pos;
    neg += static_cast<double>(w) * r.neg;
    n += w;
  }
  if (n > 0) {
    out.active = true;
    out.pos = pos / static_cast<double>(n);
    out.neg = neg / static_cast<double>(n);
    out.n_articles = n;
  }
  return out;
}

namespace {

VariableSummary summarize(std::vector<double> values, std::size_t dominant, std::size_t n)
{
  VariableSummary out;
  out.mean = stats::mean(values);
  out.sd = values.size() > 1 ? stats::sample_sd(values) : 0.0;
  std::sort(values.begin(), values.end());
  out.max = values.back();
  out.q1 = stats::quantile_sorted(values, 0.25);
  out.q2 = stats::quantile_sorted(values, 0.5);
  out.q3 = stats::quantile_sorted(values, 0.75);
  out.polarity_share = static_cast<double>(dominant) / static_cast<double>(n);
  return out;
}

} // namespace

SummaryStats sentiment_summary(std::span<const SentimentRecord> records)
{
  std::vector<double> pos, neg;
  std::size_t pos_dom = 0, neg_dom = 0;
  for (const auto& r : records) {
    if (!r.active)
      continue;
    pos.push_back(r.pos);
    neg.push_back(r.neg);
    pos_dom += r.pos > r.neg;
    neg_dom += r.neg > r.pos;
  }
  if (pos.empty())
    throw Error(Errc::no_active_records, "no records with I=1");
  SummaryStats out;
  out.n_active = pos.size();
  out.pos = summarize(std::move(pos), pos_dom, out.n_active);
  out.neg = summarize(std::move(neg), neg_dom, out.n_active);
  return out;
}

std::vector<MonthlyCorrelation> monthly_lexicon_correlation(
    const std::map<std::string, std::vector<SentimentRecord>>& by_lexicon, const corpus::TradingCalendar& calendar)
{
  using Key = std::pair<std::string, std::size_t>;
  std::map<std::string, std::map<Key, const SentimentRecord*>> active;
  for (const auto& [name, records] : by_lexicon)
    for (const auto& r : records)
      if (r.active)
        active[name][{r.symbol, r.day}] = &r;

  auto month_of = [&](std::size_t day) {
    return corpus::format_date(calendar.day(day)).substr(0, 7);
  };
  std::vector<std::string> months;
  for (const auto& d : calendar.days()) {
    auto m = corpus::format_date(d).substr(0, 7);
    if (months.empty() || months.back() != m)
      months.push_back(m);
  }

  std::vector<MonthlyCorrelation> out;
  std::vector<std::string> names;
  for (const auto& [name, records] : by_lexicon)
    names.push_back(name);
  for (std::size_t a = 0; a < names.size(); ++a) {
    for (std::size_t b = a + 1; b < names.size(); ++b) {
      std::map<std::string, std::array<std::vector<double>, 4>> per_month;
      const auto& ra = active[names[a]];
      const auto& rb = active[names[b]];
      for (const auto& [key, rec_a] : ra) {
        auto it = rb.find(key);
        if (it == rb.end() || key.second >= calendar.size())
          continue;
        auto& cols = per_month[month_of(key.second)];
        cols[0].push_back(rec_a->pos);
        cols[1].push_back(it->second->pos);
        cols[2].push_back(rec_a->neg);
        cols[3].push_back(it->second->neg);
      }
      for (const auto& m : months) {
        MonthlyCorrelation row{names[a], names[b], m, 0, std::nullopt, std::nullopt};
        auto it = per_month.find(m);
        if (it != per_month.end()) {
          const auto& cols = it->second;
          row.n = cols[0].size();
          if (row.n >= 2) {
            double p = stats::pearson(cols[0], cols[1]);
            double q = stats::pearson(cols[2], cols[3]);
            if (!std::isnan(p))
              row.pos = p;
            if (!std::isnan(q))
              row.neg = q;
          }
        }
        out.push_back(std::move(row));
      }
    }
  }
  return out;
}

lexicon::WordCounts word_frequencies(std::span<const TokenizedArticle> articles)
{
  lexicon::WordCounts counts;
  for (const auto& art : articles)
    for (const auto& sentence : art.sentences)
      for (const auto& tok : sentence)
        ++counts[tok.text];
  return counts;
}

DistillResult distill(const corpus::ArticleSet& assigned, std::span<const Lexicon> lexica,
                      const std::vector<std::string>& symbols, std::size_t n_days, const NegationConfig& negation,
                      const MatchOptions& match, std::size_t threads)
{
  const auto& articles = assigned.articles;
  const std::size_t n_lex = lexica.size();
  // scores[article][lexicon]; nullopt = skipped (no words) or unassigned
  std::vector<std::vector<std::optional<ArticleScore>>> scores(articles.size(),
                                                               std::vector<std::optional<ArticleScore>>(n_lex));
  std::vector<char> no_words(articles.size(), 0);

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < articles.size(); i += stride) {
      if (assigned.days.size() == articles.size() && !assigned.days[i])
        continue;
      TokenizedArticle tok;
      try {
        tok = tokenize(articles[i].body);
      } catch (const Error&) {
        // empty body
      }
      if (tok.word_count == 0) {
        no_words[i] = 1;
        continue;
      }
      for (std::size_t l = 0; l < n_lex; ++l) {
        auto s = score_article(tok, lexica[l], negation, match);
        s.article_id = articles[i].id;
        scores[i][l] = std::move(s);
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, articles.size()));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back(work, w, threads);
    for (auto& t : pool)
      t.join();
  }

  DistillResult result;
  for (auto flag : no_words)
    result.skipped += flag;

  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < articles.size(); ++i)
    index_of.emplace(articles[i].id, i);

  for (std::size_t l = 0; l < n_lex; ++l) {
    const auto& name = lexica[l].name();
    auto& all_scores = result.scores[name];
    for (std::size_t i = 0; i < articles.size(); ++i)
      if (scores[i][l])
        all_scores.push_back(*scores[i][l]);
    auto& recs = result.records[name];
    for (const auto& raw_symbol : symbols) {
      auto symbol = io::to_upper(raw_symbol);
      for (std::size_t d = 0; d < n_days; ++d) {
        std::vector<ArticleScore> day_scores;
        auto it = assigned.by_symbol_day.find(corpus::SymbolDay{symbol, d});
        if (it != assigned.by_symbol_day.end())
          for (const auto& id : it->second) {
            const auto& sc = scores[index_of.at(id)][l];
            if (sc)
              day_scores.push_back(*sc);
          }
        recs.push_back(aggregate_daily(day_scores, symbol, d, name));
      }
    }
  }
  return result;
}

std::string format_sentiment_csv(const std::map<std::string, std::vector<SentimentRecord>>& records,
                                 const corpus::TradingCalendar& calendar)
{
  // symbol-major, then day, then lexicon in map order
  std::vector<const SentimentRecord*> rows;
  for (const auto& [name, recs] : records)
    for (const auto& r : recs)
      rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const SentimentRecord* a, const SentimentRecord* b) {
    if (a->symbol != b->symbol)
      return a->symbol < b->symbol;
    if (a->day != b->day)
      return a->day < b->day;
    return a->lexicon_name < b->lexicon_name;
  });
  std::string out = "symbol,date,lexicon,I,pos,neg,n_articles\n";
  for (const auto* r : rows) {
    out += io::csv_escape(r->symbol);
    out += ',';
    out += corpus::format_date(calendar.day(r->day));
    out += ',';
    out += io::csv_escape(r->lexicon_name);
    out += r->active ? ",1," : ",0,";
    out += io::format_double(r->pos);
    out += ',';
    out += io::format_double(r->neg);
    out += ',';
    out += std::to_string(r->n_articles);
    out += '\n';
  }
  return out;
}

std::map<std::string, std::vector<SentimentRecord>> read_sentiment_csv(const std::filesystem::path& path,
                                                                       const corpus::TradingCalendar& calendar)
{
  if (!std::filesystem::exists(path))
    throw Error(Errc::missing_input, "sentiment file not found: " + path.string());
  auto table = io::read_csv(path);
  auto c_sym = table.column("symbol"), c_date = table.column("date"), c_lex = table.column("lexicon"),
       c_i = table.column("I"), c_pos = table.column("pos"), c_neg = table.column("neg");
  auto c_n = table.find_column("n_articles");
  std::map<std::string, std::vector<SentimentRecord>> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    if (row.size() < table.header.size())
      throw Error(Errc::malformed_record, where + ": too few columns");
    auto date = corpus::parse_date(row[c_date]);
    if (!date)
      throw Error(Errc::malformed_record, where + ": bad date");
    auto day = calendar.index_of(*date);
    if (!day)
      throw Error(Errc::calendar_mismatch, where + ": date not in trading calendar");
    auto pos = io::parse_double(row[c_pos]);
    auto neg = io::parse_double(row[c_neg]);
    if (!pos || !neg || (row[c_i] != "0" && row[c_i] != "1"))
      throw Error(Errc::malformed_record, where + ": bad numeric field");
    SentimentRecord rec;
    rec.symbol = io::to_upper(row[c_sym]);
    rec.day = *day;
    rec.lexicon_name = row[c_lex];
    rec.active = row[c_i] == "1";
    rec.pos = *pos;
    rec.neg = *neg;
    if (c_n) {
      auto n = io::parse_int(row[*c_n]);
      if (!n || *n < 0)
        throw Error(Errc::malformed_record, where + ": bad n_articles");
      rec.n_articles = static_cast<std::size_t>(*n);
    } else {
      rec.n_articles = rec.active ? 1 : 0;
    }
    out[rec.lexicon_name].push_back(std::move(rec));
  }
  return out;
}

} // namespace newsflow::sentiment
