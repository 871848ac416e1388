#pragma once

#include <string>
#include <string_view>

namespace newsflow::sentiment {

/// Classic Porter (1980) suffix-stripping stemmer, steps 1a through 5b.
/// Expects a lowercase alphabetic word; single letters come back unchanged.
std::string porter_stem(std::string_view word);

} // namespace newsflow::sentiment
