#pragma once

#include <cstddef>
#include <string_view>

namespace ocreval::metrics {

/// Error categories of one optimal edit script from reference to hypothesis.
/// S + D + C is the reference length; S + D + I is the edit distance.
struct AlignmentCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t correct = 0;

  std::size_t reference_length() const { return substitutions + deletions + correct; }
  std::size_t hypothesis_length() const { return substitutions + insertions + correct; }
  std::size_t errors() const { return substitutions + deletions + insertions; }

  AlignmentCounts& operator+=(const AlignmentCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    correct += o.correct;
    return *this;
  }
  friend AlignmentCounts operator+(AlignmentCounts a, const AlignmentCounts& b) {
    return a += b;
  }
  friend bool operator==(const AlignmentCounts&, const AlignmentCounts&) = default;
};

/// Counts from the unit-cost Levenshtein traceback. Among optimal scripts
/// the traceback (walked from the end) prefers match, then substitution,
/// then deletion, then insertion, so the counts are deterministic.
///
/// The distance is found first with the bit-parallel kernel; the traceback
/// matrix is then restricted to the diagonal band |i - j| <= distance,
/// which contains every optimal path.
AlignmentCounts align(std::u32string_view reference, std::u32string_view hypothesis);

/// Alignment of `pattern` against its best-matching substring of `text`.
struct SemiGlobalAlignment {
  std::size_t distance = 0;
  std::size_t text_begin = 0;  // matched span [text_begin, text_end)
  std::size_t text_end = 0;
  AlignmentCounts counts;  // pattern as reference, span as hypothesis
};

/// Free gaps at both ends of `text`. The span ends at the leftmost column
/// reaching the minimum; the traceback uses the same preference order as
/// align().
SemiGlobalAlignment align_semi_global(std::u32string_view pattern,
                                      std::u32string_view text);

}  // namespace ocreval::metrics
