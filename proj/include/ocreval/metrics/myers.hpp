#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ocreval::metrics {

/// Bit-parallel unit-cost edit distance (Myers 1999, block form after
/// Hyyro 2003). The pattern is preprocessed once and can then be scanned
/// against any number of texts in O(ceil(m/64) * n) word operations.
class MyersPattern {
 public:
  explicit MyersPattern(std::u32string_view pattern);

  std::size_t size() const { return length_; }

  /// Levenshtein distance between the pattern and `text`.
  std::size_t global_distance(std::u32string_view text) const;

  /// Minimum distance between the pattern and any substring of `text`
  /// (leading and trailing text characters are free).
  std::size_t semi_global_distance(std::u32string_view text) const;

 private:
  using Word = std::uint64_t;

  const Word* equality_row(char32_t c) const;
  std::size_t scan(std::u32string_view text, bool free_text_ends) const;

  std::size_t length_ = 0;
  std::size_t blocks_ = 0;
  std::vector<char32_t> alphabet_;  // sorted non-ASCII symbols
  std::array<std::int32_t, 128> ascii_symbol_{};
  std::vector<Word> peq_;  // (symbols + 1) x blocks; last row all zero
};

/// Convenience wrapper around MyersPattern::global_distance.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

}  // namespace ocreval::metrics
