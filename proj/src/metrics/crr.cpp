#include "ocreval/metrics/crr.hpp"

#include "ocreval/ingest/unicode.hpp"

namespace ocreval::metrics {

MetricValue crr(const AlignmentCounts& counts) {
  const std::size_t n = counts.reference_length();
  if (n == 0) return {counts.insertions == 0 ? 1.0 : 0.0, counts};
  return {1.0 - static_cast<double>(counts.errors()) / static_cast<double>(n), counts};
}

std::u32string page_text(const PageAnnotation& page,
                         const ingest::NormalizationPolicy& policy) {
  std::u32string out;
  for (const TextLine& line : lines_in_reading_order(page)) {
    std::u32string t = ingest::normalize(ingest::to_u32(line.text), policy);
    if (t.empty()) continue;
    if (!out.empty()) out.push_back(U'\n');
    out += t;
  }
  return out;
}

MetricValue page_crr(const PageAnnotation& gt, const PageAnnotation& pred,
                     const ingest::NormalizationPolicy& policy) {
  return crr(align(page_text(gt, policy), page_text(pred, policy)));
}

}  // namespace ocreval::metrics
