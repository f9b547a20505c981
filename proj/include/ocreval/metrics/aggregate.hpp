#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace ocreval::metrics {

struct PageMetric {
  std::string page_id;
  double value = 0.0;
  std::size_t gt_chars = 0;
};

struct AggregateValue {
  double weighted = 0.0;    // weights = ground-truth character counts
  double unweighted = 0.0;  // plain mean over pages
  std::size_t pages = 0;
  std::size_t gt_chars = 0;

  friend bool operator==(const AggregateValue&, const AggregateValue&) = default;
};

/// Corpus-level fold over per-page values, in the given order.
/// Throws EmptyCorpus for an empty list. When every page has zero ground
/// truth characters the weighted value falls back to the plain mean.
AggregateValue aggregate(std::span<const PageMetric> pages);

}  // namespace ocreval::metrics
