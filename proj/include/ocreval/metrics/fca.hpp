#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ocreval/core/model.hpp"
#include "ocreval/ingest/normalize.hpp"
#include "ocreval/metrics/crr.hpp"

namespace ocreval::metrics {

struct FcaParams {
  std::size_t min_split_length = 2;  // shorter remainders are scored as unmatched
  double max_match_penalty = 0.75;   // matching stops above this penalty

  /// Throws ocreval::Error unless min_split_length >= 1 and
  /// 0 < max_match_penalty <= 1.
  void validate() const;

  friend bool operator==(const FcaParams&, const FcaParams&) = default;
};

/// A normalized line (or a re-pooled piece of one) taking part in matching.
/// Pieces carry their parent's id with ":a" (prefix) or ":b" (suffix).
struct FcaSegment {
  std::string line_id;
  std::u32string text;

  friend bool operator==(const FcaSegment&, const FcaSegment&) = default;
};

struct FcaMatch {
  FcaSegment gt;    // the ground-truth side of the matched span
  FcaSegment pred;  // the prediction side of the matched span
  AlignmentCounts counts;
  std::size_t distance = 0;  // semi-global distance used for the penalty
};

/// Order-free line matching. Every ground-truth character ends up in
/// exactly one of: a match's reference side, unmatched_gt_chars, or
/// trimmed_gt_spaces (spaces at the cut between a matched span and its
/// re-pooled remainder, which are not scored). Same for predictions.
struct FcaMatchSet {
  std::vector<FcaMatch> matches;
  std::size_t unmatched_gt_chars = 0;
  std::size_t unmatched_pred_chars = 0;
  std::size_t trimmed_gt_spaces = 0;
  std::size_t trimmed_pred_spaces = 0;
  FcaParams params;

  /// Match counts plus unmatched gt chars as deletions and unmatched
  /// prediction chars as insertions.
  AlignmentCounts pooled() const;
};

struct FcaResult {
  MetricValue value;  // clamped to [0, 1]
  FcaMatchSet match_set;
};

/// Greedy matching with splitting over already-normalized lines.
///
/// Each round scores every (gt, pred) pair by aligning the shorter string
/// semi-globally inside the longer; penalty = distance / max length. The
/// lowest penalty wins (ties: longer gt line, smaller gt id, smaller pred
/// id). Above max_match_penalty, matching stops. The unaligned prefix and
/// suffix of the longer string go back into its pool when at least
/// min_split_length long after trimming spaces, otherwise they count as
/// unmatched. Lines must be non-empty to take part; empty ones are ignored.
FcaResult fca_segments(std::vector<FcaSegment> gt, std::vector<FcaSegment> pred,
                       const FcaParams& params = {});

/// Flexible character accuracy of a prediction page. Independent of the
/// order of either page's lines.
FcaResult fca(const PageAnnotation& gt, const PageAnnotation& pred,
              const ingest::NormalizationPolicy& policy, const FcaParams& params = {});

}  // namespace ocreval::metrics
