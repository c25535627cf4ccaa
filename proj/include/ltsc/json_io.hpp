#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ltsc/core.hpp"

namespace ltsc {

/// Canonical single-line JSON record:
///   {"base_size":B,"num_meta_tokens":M,"dict":[[m,[ids...]],...],
///    "body":[ids...],"original_length":L}
std::string to_json(const CompressedSequence& compressed);

/// Parses and validates a canonical record. Throws ParseError for invalid
/// JSON or a missing/mistyped field, and the core errors for invariant
/// violations.
CompressedSequence compressed_from_json(std::string_view text);

/// "[1,2,3]"
std::string ids_to_json(const std::vector<TokenId>& ids);

}  // namespace ltsc
