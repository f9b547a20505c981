#include "ocreval/ingest/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "ocreval/core/errors.hpp"
#include "ocreval/ingest/unicode.hpp"

namespace ocreval::ingest {

namespace {

bool all_ascii(std::u32string_view s) {
  for (char32_t c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

icu::UnicodeString to_icu(std::u32string_view s) {
  return icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(s.data()),
                                       static_cast<int32_t>(s.size()));
}

std::u32string from_icu(const icu::UnicodeString& u) {
  std::u32string out;
  out.reserve(static_cast<std::size_t>(u.length()));
  for (int32_t i = 0; i < u.length();) {
    const UChar32 c = u.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

icu::UnicodeString nfc(const icu::UnicodeString& u) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString out = n->normalize(u, status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalization failed");
  return out;
}

std::u32string unicode_steps(std::u32string_view s,
                             const NormalizationPolicy& policy) {
  if (all_ascii(s)) {
    std::u32string out(s);
    if (policy.case_fold) {
      for (char32_t& c : out) {
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
      }
    }
    return out;
  }
  icu::UnicodeString u = to_icu(s);
  const bool use_nfc = policy.unicode_form == UnicodeForm::nfc;
  if (use_nfc) u = nfc(u);
  if (policy.case_fold) {
    u.foldCase(U_FOLD_CASE_DEFAULT);
    // Full folding can emit decomposed sequences (e.g. U+0130).
    if (use_nfc) u = nfc(u);
  }
  return from_icu(u);
}

std::u32string single_pass(std::u32string_view s,
                           const NormalizationPolicy& policy) {
  std::u32string t = unicode_steps(s, policy);

  if (policy.charset) {
    std::u32string kept;
    kept.reserve(t.size());
    for (char32_t c : t) {
      if (policy.charset->contains(c)) kept.push_back(c);
    }
    t = std::move(kept);
  }

  if (policy.collapse_whitespace) {
    std::u32string out;
    out.reserve(t.size());
    bool pending_space = false;
    for (char32_t c : t) {
      if (is_whitespace(c)) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out.push_back(U' ');
      pending_space = false;
      out.push_back(c);
    }
    t = std::move(out);
  }
  return t;
}

}  // namespace

std::u32string normalize(std::u32string_view text,
                         const NormalizationPolicy& policy) {
  std::u32string current = single_pass(text, policy);
  if (all_ascii(current)) return current;
  // Filtering can unblock a composition; iterate to the fixed point. Every
  // change shortens or recomposes the string, so this terminates quickly.
  for (int round = 0; round < 16; ++round) {
    std::u32string next = single_pass(current, policy);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

std::string normalize_text(std::string_view utf8,
                           const NormalizationPolicy& policy) {
  return to_utf8(normalize(to_u32(utf8), policy));
}

}  // namespace ocreval::ingest
