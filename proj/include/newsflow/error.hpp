#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace newsflow {

/// Failure categories shared by every module. The CLI maps each code to a
/// stable machine-readable name and an exit status.
enum class Errc {
  // ingestion and parsing
  malformed_record,
  duplicate_id,
  empty_corpus,
  missing_field,
  invalid_value,
  empty_list,
  empty_text,
  price_parse_error,
  lexicon_not_found,
  missing_input,
  config_error,
  io_error,
  // data shape
  window_out_of_range,
  missing_previous,
  insufficient_history,
  empty_panel,
  calendar_mismatch,
  too_few_observations,
  single_cluster,
  too_few_points,
  dimension_mismatch,
  no_active_records,
  grid_mismatch,
  too_few_bootstraps,
  missing_component,
  // numerical
  degenerate_bar,
  singular_fit,
  rank_deficient,
  constant_column,
  non_psd_matrix,
  non_convergence,
  non_stationary_solution,
  degenerate_x,
  empty_neighborhood,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

/// Upper-snake name, e.g. "LEXICON_NOT_FOUND".
std::string_view errc_name(Errc code) noexcept;

/// True for failures of an estimation routine rather than of the inputs.
bool is_numerical(Errc code) noexcept;

} // namespace newsflow
