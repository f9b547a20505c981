#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "ocreval/core/model.hpp"
#include "ocreval/ingest/normalize.hpp"

namespace ocreval::order {

enum class OrderingKind { as_is, blind_centroid, reference_guided };

/// Strategy names as used on the command line: as_is | blind | ref.
const char* to_string(OrderingKind kind);
OrderingKind parse_ordering_kind(std::string_view name);

struct OrderingStrategy {
  OrderingKind kind = OrderingKind::as_is;
  double tau = 0.90;                   // reference_guided only
  double row_overlap_threshold = 0.5;  // blind_centroid only

  /// Throws ocreval::Error if tau is outside [0, 1] or the overlap
  /// threshold outside (0, 1].
  void validate() const;

  friend bool operator==(const OrderingStrategy&, const OrderingStrategy&) = default;
};

/// Geometric ordering. Two lines share a row when their vertical extents
/// overlap by at least `row_overlap_threshold` of the smaller extent; rows
/// are the connected groups of that relation. Rows go top to bottom by
/// mean centroid y, lines within a row left to right by centroid x.
/// Throws MissingGeometry when a line has no polygon.
PageAnnotation order_blind(const PageAnnotation& page, double row_overlap_threshold = 0.5);

struct ReorderStep {
  std::size_t reference_index = 0;  // i: position of R_i in the reference order
  std::size_t pred_index = 0;       // j: index of the chosen line in the input order
  double similarity = 0.0;          // 1 - D / max(|R_i|, |K_j|)
  bool accepted = false;

  friend bool operator==(const ReorderStep&, const ReorderStep&) = default;
};

using ReorderTrace = std::vector<ReorderStep>;

struct ReorderResult {
  PageAnnotation page;
  ReorderTrace trace;
};

/// Reference-guided reordering. For each reference line R_i in order the
/// closest not-yet-accepted prediction line K_j (unit-cost edit distance
/// on normalized text, ties to the earliest current position) is found;
/// when its similarity reaches `tau` it moves to position min(i, length)
/// and is excluded from later scans. Unaccepted lines follow the accepted
/// ones in their original relative order. Only order_index changes.
ReorderResult order_by_reference(const PageAnnotation& reference, const PageAnnotation& pred,
                                 double tau, const ingest::NormalizationPolicy& policy);

/// Applies `strategy` to `pred`. `reference` is only used by
/// reference_guided; a null reference leaves the page as is.
PageAnnotation apply_strategy(const OrderingStrategy& strategy, const PageAnnotation& pred,
                              const PageAnnotation* reference,
                              const ingest::NormalizationPolicy& policy);

}  // namespace ocreval::order
