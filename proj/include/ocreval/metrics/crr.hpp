#pragma once

#include <string>

#include "ocreval/core/model.hpp"
#include "ocreval/ingest/normalize.hpp"
#include "ocreval/metrics/alignment.hpp"

namespace ocreval::metrics {

/// A metric together with the pooled counts it was computed from.
struct MetricValue {
  double value = 0.0;
  AlignmentCounts counts;

  friend bool operator==(const MetricValue&, const MetricValue&) = default;
};

/// 1 - (S + D + I) / (S + D + C). Not clamped: insertion-heavy hypotheses
/// go negative. With N = S + D + C = 0 the value is 1 when I = 0, else 0.
MetricValue crr(const AlignmentCounts& counts);

/// The page as one sequence: lines in reading order, each normalized,
/// empty lines dropped, joined by '\n' (one character, never collapsed).
std::u32string page_text(const PageAnnotation& page,
                         const ingest::NormalizationPolicy& policy);

/// Order-sensitive page-level CRR of the joined page texts.
MetricValue page_crr(const PageAnnotation& gt, const PageAnnotation& pred,
                     const ingest::NormalizationPolicy& policy);

}  // namespace ocreval::metrics
