#include "oracles.hpp"

#include "newsflow/porter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

double gk_log_vol(double open, double high, double low, double close)
{
  long double lo = std::log(static_cast<long double>(open));
  long double u = std::log(static_cast<long double>(high)) - lo;
  long double d = std::log(static_cast<long double>(low)) - lo;
  long double c = std::log(static_cast<long double>(close)) - lo;
  long double var = 0.511L * (u - d) * (u - d) - 0.019L * (c * (u + d) - 2.0L * u * d) - 0.383L * c * c;
  return static_cast<double>(0.5L * std::log(var));
}

namespace {

long double det3(const long double m[3][3])
{
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

} // namespace

double detrended_volume(std::span<const std::optional<double>> raw, std::size_t t, std::size_t window)
{
  // centre the day index on the window to keep the normal equations well conditioned
  const long double centre = static_cast<long double>(t) - static_cast<long double>(window) / 2.0L;
  long double A[3][3] = {}, b[3] = {};
  for (std::size_t s = t - window; s < t; ++s) {
    long double x = static_cast<long double>(s) - centre;
    long double row[3] = {1.0L, x, x * x};
    for (int i = 0; i < 3; ++i) {
      b[i] += row[i] * static_cast<long double>(*raw[s]);
      for (int j = 0; j < 3; ++j)
        A[i][j] += row[i] * row[j];
    }
  }
  long double d = det3(A);
  long double coef[3];
  for (int k = 0; k < 3; ++k) {
    long double M[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        M[i][j] = j == k ? b[i] : A[i][j];
    coef[k] = det3(M) / d;
  }
  long double x = static_cast<long double>(t) - centre;
  return static_cast<double>(static_cast<long double>(*raw[t]) - (coef[0] + coef[1] * x + coef[2] * x * x));
}

newsflow::sentiment::ArticleScore score(const newsflow::sentiment::TokenizedArticle& article,
                                        const newsflow::lexicon::Lexicon& lex,
                                        const newsflow::sentiment::NegationConfig& negation)
{
  using newsflow::lexicon::Polarity;
  const auto& entries = lex.entries();
  std::vector<std::vector<std::string>> entry_words(entries.size());
  std::vector<std::vector<std::string>> entry_stems(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    std::string w;
    for (char ch : entries[e].word + " ") {
      if (ch == ' ') {
        entry_words[e].push_back(w);
        entry_stems[e].push_back(newsflow::sentiment::porter_stem(w));
        w.clear();
      } else {
        w += ch;
      }
    }
  }

  newsflow::sentiment::ArticleScore out;
  out.word_count = article.word_count;
  for (const auto& sentence : article.sentences) {
    std::size_t n = sentence.size();
    std::vector<int> owner(n, -1); // claim number per token
    struct Claim {
      std::size_t first, last;
      Polarity polarity;
    };
    std::vector<Claim> claims;
    for (int pass = 1; pass <= 2; ++pass) {
      std::size_t i = 0;
      while (i < n) {
        if (owner[i] >= 0) {
          ++i;
          continue;
        }
        bool found = false;
        for (std::size_t len = n - i; len >= 1 && !found; --len) {
          for (std::size_t e = 0; e < entries.size() && !found; ++e) {
            const auto& entry = entries[e];
            if (!entry.scoring() || entry.stemmed != (pass == 2) || entry_words[e].size() != len)
              continue;
            bool match = true;
            for (std::size_t k = 0; k < len && match; ++k) {
              if (owner[i + k] >= 0)
                match = false;
              else if (pass == 1)
                match = sentence[i + k].text == entry_words[e][k];
              else
                match = newsflow::sentiment::porter_stem(sentence[i + k].text) == entry_stems[e][k];
            }
            if (match) {
              for (std::size_t k = 0; k < len; ++k)
                owner[i + k] = static_cast<int>(claims.size());
              claims.push_back({i, i + len - 1, entry.polarity});
              i += len;
              found = true;
            }
          }
        }
        if (!found)
          ++i;
      }
    }
    auto negator_at = [&](long pos) {
      if (pos < 0 || pos >= static_cast<long>(n))
        return false;
      const auto& w = sentence[static_cast<std::size_t>(pos)].text;
      return std::find(negation.negators.begin(), negation.negators.end(), w) != negation.negators.end();
    };
    for (const auto& c : claims) {
      bool flip = false;
      for (std::size_t dist = 1; dist <= negation.window; ++dist) {
        if (negator_at(static_cast<long>(c.first) - static_cast<long>(dist)))
          flip = true;
        if (negation.bidirectional && negator_at(static_cast<long>(c.last + dist)))
          flip = true;
      }
      bool positive = (c.polarity == Polarity::positive) != flip;
      (positive ? out.pos_count : out.neg_count)++;
    }
  }
  out.pos_prop = static_cast<double>(out.pos_count) / static_cast<double>(out.word_count);
  out.neg_prop = static_cast<double>(out.neg_count) / static_cast<double>(out.word_count);
  return out;
}

DummyOls dummy_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::span<const std::size_t> entity,
                   std::size_t n_entities)
{
  const auto n = X.rows(), k = X.cols();
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, k + static_cast<Eigen::Index>(n_entities));
  Z.leftCols(k) = X;
  for (Eigen::Index i = 0; i < n; ++i)
    Z(i, k + static_cast<Eigen::Index>(entity[static_cast<std::size_t>(i)])) = 1.0;
  Eigen::VectorXd coef = Z.colPivHouseholderQr().solve(y);
  DummyOls out;
  out.beta = coef.head(k);
  double mean = coef.tail(static_cast<Eigen::Index>(n_entities)).mean();
  out.alpha = mean;
  for (std::size_t g = 0; g < n_entities; ++g)
    out.gamma.push_back(coef(k + static_cast<Eigen::Index>(g)) - mean);
  return out;
}

Eigen::MatrixXd brute_sandwich(const Eigen::MatrixXd& X, const Eigen::VectorXd& e,
                               std::span<const std::size_t> cluster)
{
  const auto k = X.cols();
  std::size_t G = *std::max_element(cluster.begin(), cluster.end()) + 1;
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t g = 0; g < G; ++g) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (cluster[static_cast<std::size_t>(i)] != g)
        continue;
      for (Eigen::Index j = 0; j < X.rows(); ++j) {
        if (cluster[static_cast<std::size_t>(j)] != g)
          continue;
        meat += e(i) * e(j) * X.row(i).transpose() * X.row(j);
      }
    }
  }
  Eigen::MatrixXd bread = (X.transpose() * X).inverse();
  return bread * meat * bread;
}

Eigen3x3 jacobi_eigen(Eigen::Matrix3d a)
{
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off < 1e-30)
      break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a(p, q)) < 1e-300)
          continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
        r(p, p) = c;
        r(q, q) = c;
        r(p, q) = s;
        r(q, p) = -s;
        a = r.transpose() * a * r;
        v = v * r;
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });
  Eigen3x3 out;
  for (int k = 0; k < 3; ++k) {
    out.values[static_cast<std::size_t>(k)] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double local_linear_at(std::span<const double> x, std::span<const double> y, double h, double x0)
{
  long double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double u = (x[i] - x0) / h;
    long double w = std::exp(-0.5L * u * u);
    long double dx = x[i] - x0;
    s0 += w;
    s1 += w * dx;
    s2 += w * dx * dx;
    t0 += w * y[i];
    t1 += w * dx * y[i];
  }
  return static_cast<double>((s2 * t0 - s1 * t1) / (s0 * s2 - s1 * s1));
}

double cv_bandwidth(std::span<const double> x, std::span<const double> y, double lo, double hi, std::size_t n_grid)
{
  double best_h = lo, best = INFINITY;
  std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
  for (std::size_t g = 0; g < n_grid; ++g) {
    double h = lo * std::pow(hi / lo, static_cast<double>(g) / static_cast<double>(n_grid - 1));
    double cv = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::vector<double> xo, yo;
      xo.reserve(xs.size() - 1);
      yo.reserve(xs.size() - 1);
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j != i) {
          xo.push_back(xs[j]);
          yo.push_back(ys[j]);
        }
      }
      double r = ys[i] - local_linear_at(xo, yo, h, xs[i]);
      cv += r * r;
    }
    if (cv < best) {
      best = cv;
      best_h = h;
    }
  }
  return best_h;
}

newsflow::panel::PanelDataset random_panel(std::mt19937_64& rng, std::size_t n_entities, std::size_t n_periods,
                                           std::size_t k, double noise_sd)
{
  std::normal_distribution<double> z;
  newsflow::panel::PanelDataset p;
  const auto n = static_cast<Eigen::Index>(n_entities * n_periods);
  p.X.resize(n, static_cast<Eigen::Index>(k));
  p.y.resize(n);
  std::vector<double> effect(n_entities);
  for (auto& e : effect)
    e = 2.0 * z(rng);
  Eigen::VectorXd beta(static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    beta(j) = z(rng);
  Eigen::Index row = 0;
  for (std::size_t g = 0; g < n_entities; ++g) {
    p.entities.push_back("E" + std::to_string(g));
    for (std::size_t t = 0; t < n_periods; ++t, ++row) {
      for (std::size_t j = 0; j < k; ++j)
        p.X(row, static_cast<Eigen::Index>(j)) = z(rng) + 0.5 * effect[g];
      p.y(row) = 1.5 + p.X.row(row).dot(beta) + effect[g] + noise_sd * z(rng);
      p.entity.push_back(g);
      p.time.push_back(t);
    }
  }
  for (std::size_t j = 0; j < k; ++j)
    p.columns.push_back("x" + std::to_string(j + 1));
  return p;
}

} // namespace oracle
