#pragma once

#include "newsflow/config.hpp"
#include "newsflow/lexicon.hpp"

#include <string>
#include <vector>

/// Subcommand implementations. Each reads its inputs from the config and
/// the output directory and writes its outputs atomically.
namespace newsflow::cli {

struct CommandReport {
  std::vector<std::string> outputs; ///< file names inside the output directory
  std::vector<std::string> warnings;
  std::vector<std::string> summary; ///< human-readable lines
};

std::vector<lexicon::Lexicon> load_lexica(const RunConfig& config);

CommandReport cmd_distill(const RunConfig& config);
CommandReport cmd_indicators(const RunConfig& config);
CommandReport cmd_panel(const RunConfig& config);
CommandReport cmd_simulate(const RunConfig& config);
CommandReport cmd_lexstats(const RunConfig& config);
CommandReport cmd_report(const RunConfig& config);

} // namespace newsflow::cli
