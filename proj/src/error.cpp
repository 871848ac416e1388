#include "newsflow/error.hpp"

namespace newsflow {

std::string_view errc_name(Errc code) noexcept
{
  switch (code) {
  case Errc::malformed_record: return "MALFORMED_RECORD";
  case Errc::duplicate_id: return "DUPLICATE_ID";
  case Errc::empty_corpus: return "EMPTY_CORPUS";
  case Errc::missing_field: return "MISSING_FIELD";
  case Errc::invalid_value: return "INVALID_VALUE";
  case Errc::empty_list: return "EMPTY_LIST";
  case Errc::empty_text: return "EMPTY_TEXT";
  case Errc::price_parse_error: return "PRICE_PARSE_ERROR";
  case Errc::lexicon_not_found: return "LEXICON_NOT_FOUND";
  case Errc::missing_input: return "MISSING_INPUT";
  case Errc::config_error: return "CONFIG_ERROR";
  case Errc::io_error: return "IO_ERROR";
  case Errc::window_out_of_range: return "WINDOW_OUT_OF_RANGE";
  case Errc::missing_previous: return "MISSING_PREVIOUS";
  case Errc::insufficient_history: return "INSUFFICIENT_HISTORY";
  case Errc::empty_panel: return "EMPTY_PANEL";
  case Errc::calendar_mismatch: return "CALENDAR_MISMATCH";
  case Errc::too_few_observations: return "TOO_FEW_OBSERVATIONS";
  case Errc::single_cluster: return "SINGLE_CLUSTER";
  case Errc::too_few_points: return "TOO_FEW_POINTS";
  case Errc::dimension_mismatch: return "DIMENSION_MISMATCH";
  case Errc::no_active_records: return "NO_ACTIVE_RECORDS";
  case Errc::grid_mismatch: return "GRID_MISMATCH";
  case Errc::too_few_bootstraps: return "TOO_FEW_BOOTSTRAPS";
  case Errc::missing_component: return "MISSING_COMPONENT";
  case Errc::degenerate_bar: return "DEGENERATE_BAR";
  case Errc::singular_fit: return "SINGULAR_FIT";
  case Errc::rank_deficient: return "RANK_DEFICIENT";
  case Errc::constant_column: return "CONSTANT_COLUMN";
  case Errc::non_psd_matrix: return "NON_PSD_MATRIX";
  case Errc::non_convergence: return "NON_CONVERGENCE";
  case Errc::non_stationary_solution: return "NON_STATIONARY_SOLUTION";
  case Errc::degenerate_x: return "DEGENERATE_X";
  case Errc::empty_neighborhood: return "EMPTY_NEIGHBORHOOD";
  }
  return "UNKNOWN";
}

bool is_numerical(Errc code) noexcept
{
  switch (code) {
  case Errc::degenerate_bar:
  case Errc::singular_fit:
  case Errc::rank_deficient:
  case Errc::constant_column:
  case Errc::non_psd_matrix:
  case Errc::non_convergence:
  case Errc::non_stationary_solution:
  case Errc::degenerate_x:
  case Errc::empty_neighborhood:
    return true;
  default:
    return false;
  }
}

} // namespace newsflow
