#pragma once

#include "newsflow/corpus.hpp"
#include "newsflow/panel.hpp"
#include "newsflow/sentiment.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace newsflow::cli {

struct LexiconSource {
  enum class Format { wordlist, mpqa };
  std::string name;
  Format format = Format::wordlist;
  std::filesystem::path positive; ///< wordlist
  std::filesystem::path negative; ///< wordlist
  std::filesystem::path path;     ///< mpqa
};

struct RunConfig {
  // corpus
  std::filesystem::path corpus;
  corpus::CorpusFormat corpus_format = corpus::CorpusFormat::jsonl;
  std::filesystem::path calendar;
  int utc_shift_minutes = 0;
  std::vector<std::string> symbols; ///< empty: every symbol with articles or prices

  // lexica and matching
  std::vector<LexiconSource> lexica;
  sentiment::NegationConfig negation;
  sentiment::MatchPolicy match_policy = sentiment::MatchPolicy::ignore_pos;

  // prices
  std::filesystem::path prices;
  std::string market_symbol = "MARKET";
  std::string vix_symbol = "VIX";
  std::size_t detrend_window = 120;

  // panel
  std::vector<panel::Suite> suites{panel::Suite::entire};
  panel::CovarianceMode covariance = panel::CovarianceMode::two_way;
  std::filesystem::path sectors;
  bool include_pca = true;
  std::size_t lag = 1;

  // simulation
  std::uint64_t seed = 20240101;
  std::size_t sim_days = 0; ///< 0: calendar length
  std::size_t n_boot = 500;
  double level = 0.95;
  std::size_t grid_points = 101;
  std::size_t min_active_days = 30;
  std::filesystem::path fits; ///< regression result file; default <out>/fits_entire.json

  // report
  std::filesystem::path labels; ///< optional hand labels: article_id,label
  std::size_t min_count = 1;    ///< corpus frequency filter for lexstats
  std::size_t top_k = 10;

  std::filesystem::path output_dir = "out";
  std::size_t threads = 1;
};

/// Reads an INI file. Relative paths resolve against the file's directory.
/// Throws Error(config_error) or Error(missing_input).
RunConfig load_config(const std::filesystem::path& path);

/// Range checks shared by every subcommand. Throws Error(config_error).
void validate(const RunConfig& config);

/// Canonical text of the configuration, used for the manifest hash.
std::string canonical_config(const RunConfig& config);

/// min(requested, NEWSFLOW_THREADS, hardware), at least 1.
std::size_t effective_threads(std::size_t requested);

} // namespace newsflow::cli
