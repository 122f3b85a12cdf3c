#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace laip {

using TokenSequence = std::vector<std::string>;

/// Splits UTF-8 text into lowercase tokens: maximal runs of letters and
/// digits. Everything else (hyphens and slashes included) separates.
TokenSequence tokenize(std::string_view text);

/// ASCII and Latin-1 lowercase fold of a UTF-8 string.
std::string to_lower(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Lowercase ASCII slug: runs of non-alphanumerics become one '-'.
std::string slugify(std::string_view text);

/// 64-bit FNV-1a, hex encoded.
std::string content_hash(std::string_view bytes);

}  // namespace laip
