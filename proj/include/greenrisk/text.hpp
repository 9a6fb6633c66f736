#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace greenrisk {

// Tokens are maximal runs of ASCII alphanumerics; bytes >= 0x80 are treated
// as token characters so UTF-8 sequences are never split. Everything else is
// a boundary and is dropped.
std::vector<std::string> tokenize(std::string_view text, bool lowercase = true);

// ASCII-only case folding.
std::string lowercase_ascii(std::string_view text);

// Strip leading/trailing ASCII whitespace.
std::string trim(std::string_view text);

// Collapse internal whitespace runs to single spaces and trim the ends.
std::string normalize_whitespace(std::string_view text);

bool is_valid_utf8(std::string_view text);

} // namespace greenrisk
