#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

/// Deterministic synthetic inputs for the end-to-end pipeline: calendar,
/// prices, news articles, three small lexica, sectors, labels and a config.
namespace newsflow::fixture {

struct FixtureOptions {
  std::size_t n_symbols = 20;
  std::size_t n_days = 300;
  std::uint64_t seed = 7;
};

/// Writes the fixture into `dir` (created if needed) and returns the path
/// of its config.ini.
std::filesystem::path write_fixture(const std::filesystem::path& dir, const FixtureOptions& options = {});

} // namespace newsflow::fixture
