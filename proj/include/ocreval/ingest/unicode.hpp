#pragma once

#include <string>
#include <string_view>

namespace ocreval::ingest {

/// UTF-8 -> code points. Ill-formed sequences decode to U+FFFD.
std::u32string to_u32(std::string_view utf8);

std::string to_utf8(std::u32string_view text);

bool is_whitespace(char32_t c);

}  // namespace ocreval::ingest
