#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocreval/bench/engine.hpp"
#include "ocreval/core/model.hpp"
#include "ocreval/ingest/normalize.hpp"
#include "ocreval/metrics/fca.hpp"
#include "ocreval/order/reading_order.hpp"

namespace ocreval::bench {

/// A prediction page whose id does not occur in the ground truth.
class UnknownPage : public Error {
 public:
  using Error::Error;
};

struct EvalConfig {
  ingest::NormalizationPolicy policy;
  std::vector<order::OrderingStrategy> strategies{order::OrderingStrategy{}};
  metrics::FcaParams fca;
  /// Reference-guided ordering label: "G.O" when the ground truth itself
  /// is the reference, otherwise whatever source produced the reference.
  std::string reference_label = "G.O";
  unsigned jobs = 1;  // 0 = hardware concurrency; never affects results

  void validate() const;
};

/// Every setting that changes a number in the report.
nlohmann::json config_to_json(const EvalConfig& config);
/// SHA-256 of the canonical JSON above.
std::string config_digest(const EvalConfig& config);

/// Predictions of one engine plus whatever the run recorded about them.
struct EngineOutput {
  std::string engine;
  std::string detector;
  Corpus predictions;
  std::vector<TimingRecord> timings;  // may be empty (offline predictions)
  std::vector<std::string> failed_pages;
};

EngineOutput engine_output(const EngineAdapter& adapter, EngineRun run);

struct PageRow {
  std::string page_id;
  std::string engine;
  std::string strategy;
  double crr = 0.0;
  double fca = 0.0;
  std::optional<double> seconds;
  std::size_t gt_chars = 0;
  bool failed = false;  // engine failure or missing prediction

  friend bool operator==(const PageRow&, const PageRow&) = default;
};

struct CorpusRow {
  std::string detector;
  std::string engine;
  std::string strategy;
  double crr = 0.0;  // gt-character weighted
  double fca = 0.0;
  double crr_unweighted = 0.0;
  double fca_unweighted = 0.0;
  std::optional<double> mean_seconds;
  std::size_t pages = 0;
  std::size_t failed_pages = 0;
  std::size_t gt_chars = 0;

  friend bool operator==(const CorpusRow&, const CorpusRow&) = default;
};

struct EvalReport {
  nlohmann::json config;
  std::string config_digest;
  std::string reference_label;
  std::vector<PageRow> pages;     // engine, strategy, then gt page order
  std::vector<CorpusRow> corpus;  // engine, then strategy order

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Scores every (engine, strategy, gt page). Predictions missing for a gt
/// page are scored as empty pages and flagged. `reference` feeds
/// reference-guided ordering and defaults to the ground truth.
/// Throws UnknownPage.
EvalReport evaluate(const Corpus& gt, const std::vector<EngineOutput>& outputs,
                    const EvalConfig& config, const Corpus* reference = nullptr);

/// Corpus rows recomputed from page rows (used for self-consistency).
std::vector<CorpusRow> corpus_rows(const std::vector<PageRow>& pages,
                                   const std::vector<EngineOutput>& outputs);

/// Number of characters the ground truth page contributes as weight.
std::size_t gt_char_count(const PageAnnotation& gt, const ingest::NormalizationPolicy& policy);

}  // namespace ocreval::bench
