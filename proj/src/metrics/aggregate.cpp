#include "ocreval/metrics/aggregate.hpp"

#include "ocreval/core/errors.hpp"

namespace ocreval::metrics {

AggregateValue aggregate(std::span<const PageMetric> pages) {
  if (pages.empty()) throw EmptyCorpus("cannot aggregate an empty page list");

  // Accumulate deviations from the first value so that a corpus of equal
  // values aggregates to exactly that value.
  const double anchor = pages.front().value;
  double weighted_dev = 0.0;
  double plain_dev = 0.0;
  std::size_t total = 0;
  for (const PageMetric& p : pages) {
    weighted_dev += static_cast<double>(p.gt_chars) * (p.value - anchor);
    plain_dev += p.value - anchor;
    total += p.gt_chars;
  }

  AggregateValue out;
  out.pages = pages.size();
  out.gt_chars = total;
  out.unweighted = anchor + plain_dev / static_cast<double>(pages.size());
  out.weighted = total == 0 ? out.unweighted
                            : anchor + weighted_dev / static_cast<double>(total);
  return out;
}

}  // namespace ocreval::metrics
