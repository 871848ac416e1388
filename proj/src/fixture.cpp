#include "newsflow/fixture.hpp"

#include "newsflow/corpus.hpp"
#include "newsflow/error.hpp"
#include "newsflow/text_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace newsflow::fixture {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> positive_words{"gain",     "gains",  "growth",  "strong",   "improve",  "improved",
                                              "improving", "profit", "profits", "beat",     "success",  "rise",
                                              "benefit",  "benefits", "robust", "upgrade",  "record",   "surge",
                                              "win",      "optimistic"};
const std::vector<std::string> negative_words{"loss",    "losses",  "decline", "declines", "declining", "weak",
                                              "risk",    "risks",   "debt",    "fell",     "drop",      "concern",
                                              "concerns", "lawsuit", "crisis", "downgrade", "miss",     "cut",
                                              "warned",  "slump"};
const std::vector<std::string> filler{
    "the",      "company", "said",  "shares", "market", "quarter", "analysts", "today",  "investors", "report",
    "revenue",  "during",  "trading", "session", "board", "announced", "plan",  "new",    "product",   "sales",
    "expected", "year",    "chief", "executive", "statement", "on", "in",      "of",     "and",       "for",
    "with",     "its",     "to",    "a",      "was",    "has",     "this",     "that",   "it",        "as",
    "by",       "at",      "Mr.",   "Inc.",   "U.S.",   "3.5",     "percent",  "2024"};

std::string number(double v, int prec)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string symbol_name(std::size_t i)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "S%02zu", i);
  return buf;
}

} // namespace

fs::path write_fixture(const fs::path& dir, const FixtureOptions& opt)
{
  if (opt.n_symbols < 4 || opt.n_days < 130)
    throw Error(Errc::invalid_value, "fixture needs at least 4 symbols and 150 days");
  fs::create_directories(dir);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;

  // weekday calendar
  std::vector<corpus::Date> days;
  std::chrono::sys_days d = std::chrono::sys_days{std::chrono::year{2021} / 1 / 4};
  while (days.size() < opt.n_days) {
    std::chrono::weekday wd{d};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday)
      days.emplace_back(d);
    d += std::chrono::days{1};
  }
  std::string cal = "# synthetic trading calendar\n";
  for (const auto& day : days)
    cal += corpus::format_date(day) + "\n";
  io::write_file_atomic(dir / "calendar.txt", cal);

  const std::size_t n = opt.n_days, m = opt.n_symbols;

  // news arrival and tone per symbol-day
  std::vector<std::vector<int>> n_articles(m, std::vector<int>(n, 0));
  std::vector<std::vector<double>> tone(m, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    double p = 0.06 + 0.49 * static_cast<double>(i) / static_cast<double>(m - 1);
    for (std::size_t t = 0; t < n; ++t) {
      tone[i][t] = normal(rng);
      if (unif(rng) < p)
        n_articles[i][t] = unif(rng) < 0.1 ? 2 : 1;
    }
  }

  // prices: market, volatility index, symbols
  std::string prices = "symbol,date,open,high,low,close,volume\n";
  auto bar = [&](const std::string& sym, std::size_t t, double open, double close, double range_sd, double volume) {
    double hi = std::max(open, close) * std::exp(std::abs(normal(rng)) * range_sd);
    double lo = std::min(open, close) * std::exp(-std::abs(normal(rng)) * range_sd);
    prices += sym + ',' + corpus::format_date(days[t]) + ',' + number(open, 4) + ',' + number(hi, 4) + ',' +
              number(lo, 4) + ',' + number(close, 4) + ',' + number(std::round(volume), 0) + '\n';
  };
  std::vector<double> rm(n, 0.0);
  {
    double h = 1e-4, eps = 0.0, close = 3000.0, vix = 18.0;
    for (std::size_t t = 0; t < n; ++t) {
      h = 1e-5 + 0.08 * eps * eps + 0.82 * h;
      eps = std::sqrt(h) * normal(rng);
      rm[t] = t == 0 ? 0.0 : 0.0003 + eps;
      double open = close * std::exp(0.001 * normal(rng));
      double next = t == 0 ? close : close * std::exp(rm[t]);
      // keep the open between the two closes' neighbourhood
      bar("MARKET", t, open, next, std::sqrt(h) * 0.6, 2e9 * std::exp(0.2 * normal(rng)));
      close = next;
      vix = std::max(9.0, 18.0 + 0.9 * (vix - 18.0) + 400.0 * (std::sqrt(h) - 0.01) + 0.8 * normal(rng));
      double vo = vix * std::exp(0.01 * normal(rng));
      bar("VIX", t, vo, vix, 0.01, 0);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double base = -4.2 + 0.3 * normal(rng);
    const double beta_m = 0.6 + 0.8 * unif(rng);
    const double trend1 = 0.002 * normal(rng), trend2 = 5e-6 * normal(rng);
    double log_sigma = base, close = 20.0 + 200.0 * unif(rng);
    for (std::size_t t = 0; t < n; ++t) {
      double news_neg = 0.0, news_pos = 0.0;
      if (t > 0 && n_articles[i][t - 1] > 0) {
        news_neg = std::max(0.0, -tone[i][t - 1]);
        news_pos = std::max(0.0, tone[i][t - 1]);
      }
      log_sigma = base + 0.5 * (log_sigma - base) + 0.25 * news_neg + 0.05 * news_pos + 0.15 * normal(rng);
      double sigma = std::exp(log_sigma);
      double r = t == 0 ? 0.0 : beta_m * rm[t] + sigma * normal(rng);
      double open = close * std::exp(0.2 * sigma * normal(rng));
      double next = t == 0 ? close : close * std::exp(r);
      double tt = static_cast<double>(t);
      double log_vol = 13.0 + trend1 * tt + trend2 * tt * tt + 0.3 * (n_articles[i][t] > 0) + 0.25 * normal(rng);
      bar(symbol_name(i), t, open, next, sigma * 0.7, std::exp(log_vol));
      close = next;
    }
  }
  io::write_file_atomic(dir / "prices.csv", prices);

  // articles
  auto pick = [&](const std::vector<std::string>& v) { return v[static_cast<std::size_t>(unif(rng) * v.size())]; };
  std::string jsonl, labels = "article_id,label\n";
  std::size_t count = 0;
  auto emit = [&](const std::string& id, corpus::Timestamp ts, const std::vector<std::string>& syms, double tau) {
    std::string body;
    int n_sent = 2 + static_cast<int>(unif(rng) * 3);
    double p_pos = 1.0 / (1.0 + std::exp(-1.5 * tau));
    for (int s = 0; s < n_sent; ++s) {
      int len = 6 + static_cast<int>(unif(rng) * 9);
      std::string sentence;
      for (int w = 0; w < len; ++w) {
        std::string word;
        double u = unif(rng);
        if (u < 0.14) {
          if (unif(rng) < 0.08)
            word = unif(rng) < 0.5 ? "not " : "never ";
          word += pick(unif(rng) < p_pos ? positive_words : negative_words);
        } else if (u < 0.16) {
          word = unif(rng) < 0.5 ? "isn't" : "didn't";
        } else if (u < 0.18) {
          word = unif(rng) < 0.5 ? "beat expectations" : "profit warning";
        } else {
          word = pick(filler);
        }
        if (w == 0)
          word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
        sentence += (w ? " " : "") + word;
      }
      body += (s ? " " : "") + sentence + (unif(rng) < 0.1 ? "!" : ".");
    }
    nlohmann::ordered_json j;
    j["id"] = id;
    j["published_at"] = corpus::format_timestamp(ts);
    j["symbols"] = syms;
    j["title"] = syms.front() + " update";
    j["body"] = body;
    jsonl += j.dump() + "\n";
    if (count < 60)
      labels += id + ',' + (tau > 0.3 ? "positive" : tau < -0.3 ? "negative" : "neutral") + '\n';
    ++count;
  };
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      for (int a = 0; a < n_articles[i][t]; ++a) {
        // published on the trading date or, for Monday news, sometimes over the weekend
        auto day = std::chrono::sys_days{days[t]};
        std::chrono::weekday wd{day};
        if (wd == std::chrono::Monday && unif(rng) < 0.3)
          day -= std::chrono::days{1};
        auto ts = corpus::Timestamp{day} + std::chrono::seconds(static_cast<long>(unif(rng) * 86399));
        std::vector<std::string> syms{symbol_name(i)};
        if (unif(rng) < 0.05)
          syms.push_back(symbol_name((i + 1 + static_cast<std::size_t>(unif(rng) * (m - 1))) % m));
        char id[32];
        std::snprintf(id, sizeof id, "a%05zu", count);
        emit(id, ts, syms, tone[i][t]);
      }
    }
  }
  // a few articles before the first trading day stay unassigned
  for (int k = 0; k < 5; ++k) {
    auto ts = corpus::Timestamp{std::chrono::sys_days{days.front()}} - std::chrono::hours(48 + k);
    char id[32];
    std::snprintf(id, sizeof id, "early%d", k);
    emit(id, ts, {symbol_name(static_cast<std::size_t>(k))}, 0.0);
  }
  io::write_file_atomic(dir / "articles.jsonl", jsonl);
  io::write_file_atomic(dir / "labels.csv", labels);

  // lexica
  io::write_file_atomic(dir / "lexa_positive.txt",
                        "; synthetic positive list\ngain\ngrowth\nstrong\nimprove\nprofit\nbeat\nsuccess\nrise\n"
                        "benefit\nrobust\n");
  io::write_file_atomic(dir / "lexa_negative.txt",
                        "; synthetic negative list\nloss\ndecline\nweak\nrisk\ndebt\nfell\ndrop\nconcern\nlawsuit\n"
                        "crisis\n");
  io::write_file_atomic(dir / "lexb_positive.txt",
                        "gain\nstrong\nupgrade\nrecord\nsurge\nprofit\nprofits\nwin\noptimistic\ngains\n");
  io::write_file_atomic(dir / "lexb_negative.txt",
                        "loss\nlosses\nweak\ndowngrade\nmiss\ncut\nwarned\nslump\ndebt\nrisk\ndecline\nfell\n");
  io::write_file_atomic(
      dir / "lexc.tff",
      "type=weaksubj len=1 word1=improve pos1=verb stemmed1=y priorpolarity=positive\n"
      "type=strongsubj len=1 word1=benefit pos1=anypos stemmed1=y priorpolarity=positive\n"
      "type=weaksubj len=1 word1=growth pos1=noun stemmed1=n priorpolarity=positive\n"
      "type=strongsubj len=1 word1=success pos1=noun stemmed1=n priorpolarity=positive\n"
      "type=strongsubj len=1 word1=optimistic pos1=adj stemmed1=n priorpolarity=positive\n"
      "type=weaksubj len=1 word1=gain pos1=noun stemmed1=y priorpolarity=positive\n"
      "type=strongsubj len=1 word1=robust pos1=adj stemmed1=n priorpolarity=positive\n"
      "type=weaksubj len=2 word1=beat word2=expectations pos1=verb stemmed1=n priorpolarity=positive\n"
      "type=weaksubj len=1 word1=decline pos1=verb stemmed1=y priorpolarity=negative\n"
      "type=weaksubj len=1 word1=risk pos1=noun stemmed1=y priorpolarity=negative\n"
      "type=weaksubj len=1 word1=concern pos1=verb stemmed1=y priorpolarity=negative\n"
      "type=strongsubj len=1 word1=crisis pos1=noun stemmed1=n priorpolarity=negative\n"
      "type=strongsubj len=1 word1=lawsuit pos1=noun stemmed1=n priorpolarity=negative\n"
      "type=weaksubj len=1 word1=warn pos1=verb stemmed1=y priorpolarity=negative\n"
      "type=strongsubj len=1 word1=slump pos1=anypos stemmed1=y priorpolarity=negative\n"
      "type=weaksubj len=2 word1=profit word2=warning pos1=noun stemmed1=n priorpolarity=negative\n"
      "type=weaksubj len=1 word1=company pos1=noun stemmed1=n priorpolarity=neutral\n"
      "type=weaksubj len=1 word1=report pos1=noun stemmed1=n priorpolarity=both\n");

  std::string sectors = "symbol,sector\n";
  const char* names[] = {"Technology", "Financials", "Energy", "Health Care"};
  for (std::size_t i = 0; i < m; ++i)
    sectors += symbol_name(i) + ',' + names[i % 4] + '\n';
  io::write_file_atomic(dir / "sectors.csv", sectors);

  io::write_file_atomic(dir / "config.ini",
                        "[corpus]\npath = articles.jsonl\nformat = jsonl\ncalendar = calendar.txt\n"
                        "utc_shift_minutes = 0\n\n"
                        "[lexicon_LEXA]\nformat = wordlist\npositive = lexa_positive.txt\nnegative = lexa_negative.txt\n\n"
                        "[lexicon_LEXB]\nformat = wordlist\npositive = lexb_positive.txt\nnegative = lexb_negative.txt\n\n"
                        "[lexicon_LEXC]\nformat = mpqa\npath = lexc.tff\n\n"
                        "[negation]\nwindow = 5\nbidirectional = true\n\n"
                        "[prices]\npath = prices.csv\nmarket_symbol = MARKET\nvix_symbol = VIX\ndetrend_window = 120\n\n"
                        "[panel]\nsuites = entire, lags_noncumulative, lags_cumulative, attention, sector\n"
                        "covariance = two_way\nsectors = sectors.csv\npca = true\n\n"
                        "[simulate]\nseed = 20240101\nn_boot = 500\nlevel = 0.95\ngrid_points = 101\n"
                        "min_active_days = 30\n\n"
                        "[report]\nlabels = labels.csv\nmin_count = 1\ntop_k = 10\n\n"
                        "[output]\ndir = out\n");
  return dir / "config.ini";
}

} // namespace newsflow::fixture
