#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ocreval/ingest/charset.hpp"

namespace ocreval::ingest {

enum class UnicodeForm { nfc, none };

struct NormalizationPolicy {
  bool case_fold = true;
  UnicodeForm unicode_form = UnicodeForm::nfc;
  std::optional<Charset> charset;  // characters outside it are dropped
  bool collapse_whitespace = true;

  friend bool operator==(const NormalizationPolicy&,
                         const NormalizationPolicy&) = default;
};

/// Applies, in order: Unicode normalization, case folding, charset
/// filtering, whitespace collapsing (runs -> one space, ends trimmed).
/// The steps are repeated until the output is a fixed point, so the
/// function is idempotent for every policy.
std::u32string normalize(std::u32string_view text,
                         const NormalizationPolicy& policy);

std::string normalize_text(std::string_view utf8,
                           const NormalizationPolicy& policy);

}  // namespace ocreval::ingest
