// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.

#include "newsflow/fixture.hpp"
#include "newsflow/indicators.hpp"
#include "newsflow/lexicon.hpp"
#include "newsflow/panel.hpp"
#include "newsflow/sentiment.hpp"
#include "newsflow/simulate.hpp"
#include "newsflow/stats.hpp"
#include "newsflow/text_io.hpp"

#include "oracles.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <set>

using namespace newsflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. Garman-Klass exactness and scale invariance
Outcome gk_exactness()
{
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_rel = 0, worst_scale = 0;
  std::size_t degenerate = 0, disagreements = 0;
  for (int i = 0; i < 1000; ++i) {
    double o = 10.0 + 490.0 * u(rng);
    double c = o * std::exp(0.04 * (u(rng) - 0.5));
    double h = std::max(o, c) * std::exp(0.03 * u(rng));
    double l = std::min(o, c) * std::exp(-0.03 * u(rng));
    indicators::MarketBar bar{"X", 0, o, h, l, c, 1.0};
    auto lib = indicators::garman_klass_log_vol(bar);
    double ref = oracle::gk_log_vol(o, h, l, c);
    if (!lib) {
      ++degenerate;
      disagreements += std::isfinite(ref) ? 1 : 0;
      continue;
    }
    worst_rel = std::max(worst_rel, std::abs(*lib - ref) / std::abs(ref));
    for (double lambda : {0.5, 2.0, 10.0}) {
      indicators::MarketBar s{"X", 0, o * lambda, h * lambda, l * lambda, c * lambda, 1.0};
      auto scaled = indicators::garman_klass_log_vol(s);
      worst_scale = scaled ? std::max(worst_scale, std::abs(*scaled - *lib)) : INFINITY;
    }
  }
  return {worst_rel < 1e-12 && worst_scale < 1e-12 && disagreements == 0,
          "max rel err " + fmt(worst_rel) + ", max scale diff " + fmt(worst_scale) + ", degenerate " +
              std::to_string(degenerate)};
}

// 2. Detrended volume: no look-ahead and exact residuals
Outcome detrend_properties()
{
  std::mt19937_64 rng(202);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_quad = 0, worst_shock = 0, worst_oracle = 0;
  std::size_t poisoned_failures = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = 150 + static_cast<std::size_t>(u(rng) * 200);
    double a = 10 + 5 * u(rng), b = 0.02 * z(rng), c = 1e-4 * z(rng);
    std::vector<std::optional<double>> q(n);
    for (std::size_t s = 0; s < n; ++s)
      q[s] = a + b * static_cast<double>(s) + c * static_cast<double>(s) * static_cast<double>(s);
    std::size_t t = 120 + static_cast<std::size_t>(u(rng) * static_cast<double>(n - 121));
    worst_quad = std::max(worst_quad, std::abs(indicators::detrended_volume(q, t)));
    auto shocked = q;
    *shocked[t] += 0.5;
    worst_shock = std::max(worst_shock, std::abs(indicators::detrended_volume(shocked, t) - 0.5));

    std::vector<std::optional<double>> w(n);
    double level = 12;
    for (auto& v : w)
      v = level += 0.2 * z(rng);
    double before = indicators::detrended_volume(w, t);
    worst_oracle = std::max(worst_oracle, std::abs(before - oracle::detrended_volume(w, t, 120)));
    auto poisoned = w;
    for (std::size_t s = t + 1; s < n; ++s)
      poisoned[s] = s % 3 == 0 ? std::optional<double>() : std::optional<double>(1e12 * z(rng));
    if (indicators::detrended_volume(poisoned, t) != before)
      ++poisoned_failures;
  }
  return {worst_quad < 1e-9 && worst_shock < 1e-9 && poisoned_failures == 0 && worst_oracle < 1e-9,
          "quadratic |V| " + fmt(worst_quad) + ", shock err " + fmt(worst_shock) + ", oracle diff " +
              fmt(worst_oracle) + ", look-ahead failures " + std::to_string(poisoned_failures)};
}

// 3. Sentiment scoring against the position-by-position oracle
Outcome scoring_oracle()
{
  using lexicon::LexiconEntry;
  using lexicon::Polarity;
  using lexicon::PosTag;
  using lexicon::Strength;
  std::vector<LexiconEntry> entries{
      {"gain", Polarity::positive, true},
      {"profit", Polarity::positive, false},
      {"strong", Polarity::positive, false},
      {"improve", Polarity::positive, true},
      {"beat expectations", Polarity::positive, false, PosTag::unconstrained, Strength::unspecified, 2},
      {"loss", Polarity::negative, true},
      {"weak", Polarity::negative, false},
      {"decline", Polarity::negative, true},
      {"profit warning", Polarity::negative, false, PosTag::unconstrained, Strength::unspecified, 2},
      {"cut", Polarity::negative, false},
      {"rate cut", Polarity::positive, true, PosTag::unconstrained, Strength::unspecified, 2},
      {"report", Polarity::neutral, false},
      {"beat", Polarity::negative, false},
  };
  auto lex = lexicon::build_lexicon("SYN", entries);
  std::vector<std::string> vocab{"gain",     "gains",   "gained",   "profit",  "profits", "strong",   "improve",
                                 "improved", "improving", "beat",   "expectations", "loss", "losses", "weak",
                                 "decline",  "declined", "declining", "warning", "cut",   "cuts",     "rate",
                                 "rates",    "report",  "not",      "never",   "no",      "isn't",    "didn't",
                                 "the",      "company", "shares",   "said",    "today",   "analysts", "and",
                                 "of",       "in",      "market"};
  std::mt19937_64 rng(303);
  std::size_t mismatches = 0, claims = 0, negated = 0;
  for (int a = 0; a < 200; ++a) {
    std::size_t len = 1 + rng() % 60;
    std::string text;
    for (std::size_t i = 0; i < len; ++i) {
      std::string w = vocab[rng() % vocab.size()];
      if (rng() % 8 == 0)
        w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      text += w;
      text += rng() % 9 == 0 ? ". " : " ";
    }
    auto tok = sentiment::tokenize(text);
    sentiment::ScoreTrace trace;
    auto got = sentiment::score_article(tok, lex, {}, {}, &trace);
    auto want = oracle::score(tok, lex, {});
    claims += trace.claims.size();
    for (const auto& c : trace.claims)
      negated += c.negated;
    if (got.pos_count != want.pos_count || got.neg_count != want.neg_count || got.pos_prop != want.pos_prop ||
        got.neg_prop != want.neg_prop)
      ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 200 articles (" + std::to_string(claims) +
                               " matches, " + std::to_string(negated) + " negated)"};
}

// 4. Structured lexicon lines
Outcome mpqa_parsing()
{
  using lexicon::LexiconEntry;
  using lexicon::Polarity;
  using lexicon::PosTag;
  using lexicon::Strength;
  auto lines = io::read_lines(NEWSFLOW_TEST_DATA "/mpqa_examples.tff");
  std::vector<LexiconEntry> expected{
      {"abandoned", Polarity::negative, false, PosTag::adj, Strength::weaksubj, 1},
      {"abandonment", Polarity::negative, false, PosTag::noun, Strength::weaksubj, 1},
      {"abandon", Polarity::negative, true, PosTag::verb, Strength::weaksubj, 1},
      {"abase", Polarity::negative, true, PosTag::verb, Strength::strongsubj, 1},
      {"abasement", Polarity::negative, true, PosTag::anypos, Strength::strongsubj, 1},
      {"abash", Polarity::negative, true, PosTag::verb, Strength::strongsubj, 1},
  };
  std::size_t example_ok = 0;
  for (std::size_t i = 0; i < lines.size() && i < expected.size(); ++i)
    example_ok += lexicon::parse_mpqa_line(lines[i]) == expected[i];

  std::mt19937_64 rng(404);
  const std::vector<std::string> letters{"a", "b", "c", "d", "e", "k", "m", "o", "r", "s", "t", "u", "-"};
  std::size_t roundtrip_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    LexiconEntry e;
    e.length = 1 + rng() % 3;
    for (std::size_t w = 0; w < e.length; ++w) {
      std::string word = letters[rng() % 11];
      for (std::size_t k = 0, n = 1 + rng() % 10; k < n; ++k)
        word += letters[rng() % letters.size()];
      e.word += (w ? " " : "") + word;
    }
    e.polarity = static_cast<Polarity>(rng() % 4);
    e.stemmed = rng() % 2;
    e.pos_tag = static_cast<PosTag>(rng() % 5);
    e.strength = static_cast<Strength>(rng() % 2);
    auto line = lexicon::format_mpqa_line(e);
    auto back = lexicon::parse_mpqa_line(line);
    roundtrip_ok += back == e && lexicon::format_mpqa_line(back) == line;
  }
  return {example_ok == 6 && lines.size() == 6 && roundtrip_ok == 1000,
          std::to_string(example_ok) + "/6 example lines exact, " + std::to_string(roundtrip_ok) +
              "/1000 round trips"};
}

panel::PanelDataset unbalanced_panel(std::mt19937_64& rng, std::size_t entities, std::size_t periods, std::size_t k)
{
  auto full = oracle::random_panel(rng, entities, periods, k);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < full.y.size(); ++i) {
    bool early = full.time[static_cast<std::size_t>(i)] < 2; // at least two rows per entity
    if (early || rng() % 10 != 0)
      keep.push_back(i);
  }
  panel::PanelDataset p;
  p.columns = full.columns;
  p.entities = full.entities;
  p.X.resize(static_cast<Eigen::Index>(keep.size()), full.X.cols());
  p.y.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    p.X.row(static_cast<Eigen::Index>(r)) = full.X.row(keep[r]);
    p.y(static_cast<Eigen::Index>(r)) = full.y(keep[r]);
    p.entity.push_back(full.entity[static_cast<std::size_t>(keep[r])]);
    p.time.push_back(full.time[static_cast<std::size_t>(keep[r])]);
  }
  return p;
}

// 5. Fixed effects against dummy-variable least squares
Outcome fixed_effects_oracle()
{
  std::mt19937_64 rng(505);
  double worst_beta = 0, worst_gamma = 0, worst_sum = 0;
  std::size_t fits = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t entities = 1 + rng() % 10, k = 1 + rng() % 4;
    std::size_t periods = std::max<std::size_t>(5 + rng() % 46, (entities + k + 2) / entities + 3);
    auto p = unbalanced_panel(rng, entities, std::min<std::size_t>(periods, 50), k);
    auto r = panel::fit_fixed_effects(p, panel::CovarianceMode::classical);
    auto o = oracle::dummy_ols(p.X, p.y, p.entity, entities);
    double scale = std::max(1.0, o.beta.cwiseAbs().maxCoeff());
    worst_beta = std::max(worst_beta, (r.beta - o.beta).cwiseAbs().maxCoeff() / scale);
    double sum = 0;
    for (std::size_t g = 0; g < entities; ++g) {
      worst_gamma = std::max(worst_gamma, std::abs(r.gamma[g] - o.gamma[g]));
      sum += r.gamma[g];
    }
    worst_sum = std::max(worst_sum, std::abs(sum));
    ++fits;
  }
  return {fits == 100 && worst_beta < 1e-8 && worst_gamma < 1e-8 && worst_sum < 1e-8,
          "max beta diff " + fmt(worst_beta) + ", max gamma diff " + fmt(worst_gamma) + ", max |sum gamma| " +
              fmt(worst_sum)};
}

// 6. Clustered standard errors
Outcome clustered_se()
{
  std::mt19937_64 rng(606);
  double worst_singleton = 0, worst_factor = 0, worst_brute = 0;
  for (int rep = 0; rep < 20; ++rep) {
    auto p = oracle::random_panel(rng, 6, 25, 3);
    auto r = panel::fit_fixed_effects(p, panel::CovarianceMode::hc);
    auto Xw = panel::within_transform(p.X, p.entity, p.entities.size());
    std::vector<std::size_t> singles(static_cast<std::size_t>(Xw.rows()));
    for (std::size_t i = 0; i < singles.size(); ++i)
      singles[i] = i;
    Eigen::MatrixXd hc = panel::hc0_covariance(Xw, r.residuals);
    double scale = hc.cwiseAbs().maxCoeff();
    auto raw = panel::sandwich_covariance(Xw, r.residuals, singles, false);
    worst_singleton = std::max(worst_singleton, (raw - hc).cwiseAbs().maxCoeff() / scale);
    double n = static_cast<double>(Xw.rows()), k = static_cast<double>(Xw.cols());
    auto adjusted = panel::sandwich_covariance(Xw, r.residuals, singles, true);
    double factor = n / (n - 1) * (n - 1) / (n - k);
    worst_factor = std::max(worst_factor, (adjusted - factor * hc).cwiseAbs().maxCoeff() / (factor * scale));
    auto brute = oracle::brute_sandwich(Xw, r.residuals, p.entity);
    auto lib = panel::sandwich_covariance(Xw, r.residuals, p.entity, false);
    worst_brute = std::max(worst_brute, (lib - brute).cwiseAbs().maxCoeff() / brute.cwiseAbs().maxCoeff());
  }

  // i.i.d. homoskedastic panels: clustered and classical standard errors agree on average
  const int sims = 500;
  Eigen::VectorXd sum_classical = Eigen::VectorXd::Zero(2), sum_entity = sum_classical, sum_time = sum_classical,
                  sum_two = sum_classical;
  std::normal_distribution<double> z;
  for (int s = 0; s < sims; ++s) {
    panel::PanelDataset p;
    const std::size_t N = 30, T = 30;
    p.X.resize(N * T, 2);
    p.y.resize(N * T);
    for (std::size_t g = 0; g < N; ++g) {
      p.entities.push_back("E" + std::to_string(g));
      double effect = z(rng);
      for (std::size_t t = 0; t < T; ++t) {
        auto row = static_cast<Eigen::Index>(g * T + t);
        p.X(row, 0) = z(rng);
        p.X(row, 1) = z(rng);
        p.y(row) = effect + 0.5 * p.X(row, 0) - 0.3 * p.X(row, 1) + z(rng);
        p.entity.push_back(g);
        p.time.push_back(t);
      }
    }
    p.columns = {"x1", "x2"};
    sum_classical += panel::fit_fixed_effects(p, panel::CovarianceMode::classical).se;
    sum_entity += panel::fit_fixed_effects(p, panel::CovarianceMode::by_entity).se;
    sum_time += panel::fit_fixed_effects(p, panel::CovarianceMode::by_time).se;
    sum_two += panel::fit_fixed_effects(p, panel::CovarianceMode::two_way).se;
  }
  double worst_ratio = 0;
  std::string ratios;
  for (const auto* v : {&sum_entity, &sum_time, &sum_two}) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      double ratio = (*v)(j) / sum_classical(j);
      worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));
      ratios += " " + fmt(ratio);
    }
  }
  return {worst_singleton < 1e-10 && worst_factor < 1e-10 && worst_brute < 1e-10 && worst_ratio < 0.15,
          "singleton vs robust " + fmt(worst_singleton) + ", with factor " + fmt(worst_factor) + ", brute meat " +
              fmt(worst_brute) + "; mean SE ratios (entity, time, two-way):" + ratios};
}

// 7. Principal component index
Outcome pca_oracle()
{
  std::mt19937_64 rng(707);
  std::normal_distribution<double> z;
  Eigen::MatrixXd same(200, 3);
  for (Eigen::Index i = 0; i < same.rows(); ++i)
    same.row(i).setConstant(0.05 + 0.01 * z(rng));
  auto idx = panel::pca_sentiment_index(same);
  double share_err = std::abs(idx.explained_share - 1.0);
  double load_err = (idx.loadings - Eigen::Vector3d::Constant(1.0 / std::sqrt(3.0))).cwiseAbs().maxCoeff();

  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::MatrixXd m(50 + rng() % 200, 3);
    Eigen::Matrix3d mix = Eigen::Matrix3d::Random();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      Eigen::Vector3d e(z(rng), z(rng), z(rng));
      m.row(i) = (mix * e).transpose();
    }
    auto r = panel::pca_sentiment_index(m);
    Eigen::MatrixXd c = m.rowwise() - m.colwise().mean();
    Eigen::Matrix3d cov = c.transpose() * c / static_cast<double>(m.rows() - 1);
    Eigen::Vector3d sd = cov.diagonal().cwiseSqrt();
    Eigen::Matrix3d corr = sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();
    auto j = oracle::jacobi_eigen(corr);
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::abs(r.eigenvalues(k) - j.values[static_cast<std::size_t>(k)]));
    worst = std::max(worst, std::abs(r.explained_share - j.values[0] / 3.0));
    Eigen::Vector3d v = j.vectors.col(0);
    if (v.sum() < 0)
      v = -v;
    worst = std::max(worst, (r.loadings - v).cwiseAbs().maxCoeff());
  }
  return {share_err <= 1e-12 && load_err < 1e-10 && worst < 1e-10,
          "identical columns: share err " + fmt(share_err) + ", loading err " + fmt(load_err) +
              "; random inputs max diff " + fmt(worst)};
}

// 8. MA(1)-GARCH(1,1) parameter recovery
Outcome garch_recovery()
{
  simulate::GarchParams truth{0.0, 0.1, 0.05, 0.1, 0.8};
  int recovered = 0;
  double worst = 0;
  std::string failures;
  for (int rep = 0; rep < 20; ++rep) {
    auto r = simulate::simulate_ma1_garch11(truth, 20000, stats::derive_seed(808, static_cast<std::uint64_t>(rep)));
    try {
      auto f = simulate::fit_ma1_garch11(r).params;
      double err = std::max({std::abs(f.theta - truth.theta), std::abs(f.omega - truth.omega),
                             std::abs(f.alpha - truth.alpha), std::abs(f.beta - truth.beta)});
      worst = std::max(worst, err);
      if (err <= 0.05)
        ++recovered;
    } catch (const Error& e) {
      failures += " rep" + std::to_string(rep) + ":" + std::string(errc_name(e.code()));
    }
  }
  return {recovered >= 18, std::to_string(recovered) + "/20 within 0.05 (largest error " + fmt(worst) + ")" + failures};
}

// 9. Copula fidelity
Outcome copula_fidelity()
{
  std::mt19937_64 rng(909);
  std::normal_distribution<double> z;
  std::gamma_distribution<double> gam(2.0, 0.02);
  const Eigen::Index m = 3000;
  Eigen::MatrixXd data(m, 3);
  for (Eigen::Index i = 0; i < m; ++i) {
    double a = z(rng), b = z(rng), c = z(rng);
    data(i, 0) = gam(rng) + 0.01 * std::exp(a);
    data(i, 1) = std::exp(0.7 * a + 0.7 * b);
    data(i, 2) = std::pow(-0.5 * a + 0.3 * b + c, 3);
  }
  auto cop = simulate::fit_gaussian_copula(data);
  std::vector<simulate::EmpiricalDistribution> marg;
  for (Eigen::Index j = 0; j < 3; ++j)
    marg.emplace_back(std::vector<double>(data.col(j).data(), data.col(j).data() + m));
  auto s = simulate::sample_copula(cop, marg, 10000, 31337);
  auto refit = simulate::fit_gaussian_copula(s);
  double corr_err = (refit.correlation - cop.correlation).cwiseAbs().maxCoeff();
  double ks = 0;
  for (Eigen::Index j = 0; j < 3; ++j)
    ks = std::max(ks, simulate::ks_distance(std::vector<double>(s.col(j).data(), s.col(j).data() + s.rows()),
                                            std::vector<double>(data.col(j).data(), data.col(j).data() + m)));
  return {corr_err <= 0.05 && ks < 0.03,
          "max correlation err " + fmt(corr_err) + " (targets " + fmt(cop.correlation(0, 1)) + ", " +
              fmt(cop.correlation(0, 2)) + ", " + fmt(cop.correlation(1, 2)) + "), max KS " + fmt(ks)};
}

// 10. Local-linear exactness and uniform band coverage
Outcome smoother_coverage()
{
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z;
  double worst_affine = 0;
  for (int rep = 0; rep < 20; ++rep) {
    double a = 10 * z(rng), b = 10 * z(rng);
    std::vector<double> x(300), y(300);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      y[i] = a + b * x[i];
    }
    auto grid = simulate::linear_grid(0.0, 1.0, 101);
    double h = 0.01 + u(rng);
    auto f = simulate::local_linear_fit(x, y, h, grid);
    for (std::size_t g = 0; g < grid.size(); ++g)
      worst_affine = std::max(worst_affine, std::abs(f.curve[g] - (a + b * grid[g])));
  }

  const int reps = 200;
  int covered = 0;
  auto truth = [](double x) { return std::sin(2 * M_PI * x); };
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> x(500), y(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      y[i] = truth(x[i]) + 0.3 * z(rng);
    }
    auto grid = simulate::linear_grid(*std::min_element(x.begin(), x.end()), *std::max_element(x.begin(), x.end()), 101);
    auto fit = simulate::local_linear_fit(x, y, simulate::plugin_bandwidth(x, y), grid);
    auto band = simulate::uniform_band(fit, x, y, 0.95, 500, stats::derive_seed(1010, static_cast<std::uint64_t>(rep)));
    bool all = true;
    for (std::size_t g = 0; g < grid.size() && all; ++g)
      all = band.lower[g] <= truth(grid[g]) && truth(grid[g]) <= band.upper[g];
    covered += all;
  }
  double coverage = static_cast<double>(covered) / reps;
  return {worst_affine < 1e-10 && coverage >= 0.90,
          "affine max err " + fmt(worst_affine) + ", simultaneous coverage " + fmt(coverage) + " over " +
              std::to_string(reps) + " replications"};
}

int run_cli(const fs::path& config, const fs::path& out, const std::string& cmd)
{
  std::string line = std::string(NEWSFLOW_CLI) + " -q -c " + config.string() + " -o " + out.string() + " " + cmd +
                     " > /dev/null 2>&1";
  int status = std::system(line.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 11. End-to-end determinism on the bundled fixture
Outcome end_to_end()
{
  auto root = fs::temp_directory_path() / ("newsflow_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  auto config = fixture::write_fixture(root / "fixture");
  auto start = std::chrono::steady_clock::now();
  std::string failed;
  for (const char* out : {"run_a", "run_b"})
    for (const char* cmd : {"distill", "indicators", "panel", "simulate", "lexstats", "report"})
      if (run_cli(config, root / out, cmd) != 0)
        failed += std::string(" ") + out + "/" + cmd;
  double elapsed = seconds_since(start);

  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(root / "run_a")) {
    ++files;
    auto other = root / "run_b" / entry.path().filename();
    if (!fs::exists(other) || io::read_file(entry.path()) != io::read_file(other))
      ++differing;
  }
  std::size_t files_b = static_cast<std::size_t>(std::distance(fs::directory_iterator(root / "run_b"), {}));
  std::size_t articles = io::read_lines(root / "fixture" / "articles.jsonl").size();
  fs::remove_all(root);
  return {failed.empty() && differing == 0 && files == files_b && files > 0 && elapsed < 120.0,
          std::to_string(files) + " files, " + std::to_string(differing) + " differ; " + std::to_string(articles) +
              " articles; two full runs in " + fmt(elapsed) + " s" + (failed.empty() ? "" : "; failed:" + failed)};
}

// 12. Asymmetry: negative tone raises volatility, positive tone does not
Outcome asymmetry()
{
  const int runs = 20;
  int separated = 0;
  std::string detail;
  for (int run = 0; run < runs; ++run) {
    std::uint64_t seed = stats::derive_seed(1212, static_cast<std::uint64_t>(run));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::gamma_distribution<double> gam(2.0, 0.02);

    simulate::ScenarioConfig cfg;
    cfg.alpha = -4.0;
    cfg.beta = {{"I", 0.0}, {"Pos", 0.0}, {"Neg", 0.905}, {"R_M", 0.0}, {"VIX", 0.0}, {"R", 0.0}};
    for (int i = 0; i < 2000; ++i)
      cfg.residuals.push_back(0.02 * z(rng));
    const std::size_t n_sym = 20;
    for (std::size_t s = 0; s < n_sym; ++s) {
      std::vector<double> pos, neg;
      for (int i = 0; i < 300; ++i) {
        pos.push_back(gam(rng));
        neg.push_back(gam(rng));
      }
      simulate::SymbolComponents c;
      c.symbol = "S" + std::to_string(s);
      c.p = 0.2 + 0.6 * static_cast<double>(s) / static_cast<double>(n_sym - 1);
      c.copula = simulate::GaussianCopula{Eigen::Matrix2d{{1.0, -0.2}, {-0.2, 1.0}}};
      c.marginals = {simulate::EmpiricalDistribution(pos), simulate::EmpiricalDistribution(neg)};
      cfg.symbols.push_back(c);
    }
    cfg.residual_copula = simulate::GaussianCopula{Eigen::MatrixXd::Identity(n_sym + 1, n_sym + 1)};
    std::vector<double> std_normal;
    for (int i = 0; i < 500; ++i)
      std_normal.push_back(z(rng));
    cfg.residual_marginals.assign(n_sym + 1, simulate::EmpiricalDistribution(std_normal));
    cfg.market_sigma_scale = 0.01;
    cfg.vix = 20.0;
    cfg.n_days = 300;
    cfg.seed = seed;

    auto obs = simulate::simulate_scenario(cfg);
    auto curves = simulate::asymmetry_curves(obs, 101, 0.95, 500, seed);
    double mid = 0.5 * (curves.grid.front() + curves.grid.back());
    bool upper = std::any_of(curves.separated.begin(), curves.separated.end(),
                             [&](const simulate::Interval& iv) { return iv.neg_above && iv.hi > mid; });
    separated += upper;
    if (run < 3 && !curves.separated.empty())
      detail += " [" + fmt(curves.separated.front().lo) + ", " + fmt(curves.separated.back().hi) + "]";
  }
  return {separated >= 18, std::to_string(separated) + "/20 runs separate on the upper range; e.g." + detail};
}

} // namespace

int main(int argc, char** argv)
{
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"volatility estimator exactness", gk_exactness},
      {"detrended volume residual and no look-ahead", detrend_properties},
      {"sentiment scoring oracle", scoring_oracle},
      {"structured lexicon parsing", mpqa_parsing},
      {"fixed-effects oracle", fixed_effects_oracle},
      {"clustered standard errors", clustered_se},
      {"principal component index", pca_oracle},
      {"GARCH parameter recovery", garch_recovery},
      {"copula fidelity", copula_fidelity},
      {"smoother exactness and band coverage", smoother_coverage},
      {"end-to-end determinism", end_to_end},
      {"asymmetry reproduction", asymmetry},
  };
  const double limits[] = {1, 5, 5, 1e9, 1e9, 60, 1e9, 300, 1e9, 300, 120, 1e9};
  std::set<int> only;
  for (int i = 1; i < argc; ++i)
    only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    int id = static_cast<int>(k + 1);
    if (!only.empty() && !only.count(id))
      continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double t = seconds_since(start);
    bool in_time = t < limits[k];
    bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("criterion %2d %s  %s: %s (%.2f s%s)\n", id, pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.c_str(), t, in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
