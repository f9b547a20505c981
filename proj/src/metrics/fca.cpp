#include "ocreval/metrics/fca.hpp"

#include <algorithm>
#include <memory>
#include <optional>

#include "ocreval/ingest/unicode.hpp"
#include "ocreval/metrics/myers.hpp"

namespace ocreval::metrics {

namespace {

struct PoolEntry {
  FcaSegment segment;
  bool alive = true;
  mutable std::unique_ptr<MyersPattern> pattern;

  const MyersPattern& myers() const {
    if (!pattern) pattern = std::make_unique<MyersPattern>(segment.text);
    return *pattern;
  }
  std::size_t size() const { return segment.text.size(); }
};

struct Candidate {
  std::size_t g = 0;
  std::size_t p = 0;
  std::size_t distance = 0;
  std::size_t longest = 0;
};

class Matcher {
 public:
  Matcher(std::vector<FcaSegment> gt, std::vector<FcaSegment> pred, const FcaParams& params)
      : params_(params) {
    result_.params = params;
    for (auto& s : gt) {
      if (!s.text.empty()) gt_.push_back({std::move(s), true, nullptr});
    }
    for (auto& s : pred) {
      if (!s.text.empty()) pred_.push_back({std::move(s), true, nullptr});
    }
  }

  FcaMatchSet run() {
    while (auto best = select()) {
      if (static_cast<double>(best->distance) >
          params_.max_match_penalty * static_cast<double>(best->longest)) {
        break;
      }
      commit(*best);
    }
    for (const auto& e : gt_) {
      if (e.alive) result_.unmatched_gt_chars += e.size();
    }
    for (const auto& e : pred_) {
      if (e.alive) result_.unmatched_pred_chars += e.size();
    }
    return std::move(result_);
  }

 private:
  std::size_t distance(std::size_t g, std::size_t p) {
    if (distances_.size() < gt_.size()) distances_.resize(gt_.size());
    auto& row = distances_[g];
    if (row.size() < pred_.size()) row.resize(pred_.size(), kUnknown);
    if (row[p] == kUnknown) {
      const PoolEntry& ge = gt_[g];
      const PoolEntry& pe = pred_[p];
      row[p] = ge.size() <= pe.size() ? ge.myers().semi_global_distance(pe.segment.text)
                                      : pe.myers().semi_global_distance(ge.segment.text);
    }
    return row[p];
  }

  // Strict "a is preferred over b".
  bool preferred(const Candidate& a, const Candidate& b) const {
    const auto lhs = static_cast<unsigned long long>(a.distance) * b.longest;
    const auto rhs = static_cast<unsigned long long>(b.distance) * a.longest;
    if (lhs != rhs) return lhs < rhs;
    const std::size_t ag = gt_[a.g].size(), bg = gt_[b.g].size();
    if (ag != bg) return ag > bg;
    const auto& aid = gt_[a.g].segment.line_id;
    const auto& bid = gt_[b.g].segment.line_id;
    if (aid != bid) return aid < bid;
    return pred_[a.p].segment.line_id < pred_[b.p].segment.line_id;
  }

  std::optional<Candidate> select() {
    std::optional<Candidate> best;
    for (std::size_t g = 0; g < gt_.size(); ++g) {
      if (!gt_[g].alive) continue;
      for (std::size_t p = 0; p < pred_.size(); ++p) {
        if (!pred_[p].alive) continue;
        Candidate c{g, p, distance(g, p), std::max(gt_[g].size(), pred_[p].size())};
        if (!best || preferred(c, *best)) best = c;
      }
    }
    return best;
  }

  void commit(const Candidate& c) {
    PoolEntry& ge = gt_[c.g];
    PoolEntry& pe = pred_[c.p];
    const bool gt_is_pattern = ge.size() <= pe.size();
    const std::u32string& pattern = gt_is_pattern ? ge.segment.text : pe.segment.text;
    const std::u32string& text = gt_is_pattern ? pe.segment.text : ge.segment.text;
    const SemiGlobalAlignment sg = align_semi_global(pattern, text);

    FcaMatch match;
    match.distance = sg.distance;
    match.counts = sg.counts;
    const std::u32string span = text.substr(sg.text_begin, sg.text_end - sg.text_begin);
    if (gt_is_pattern) {
      match.gt = ge.segment;
      match.pred = {pe.segment.line_id, span};
    } else {
      // Reference is the gt span: the pattern's deletions are insertions.
      std::swap(match.counts.deletions, match.counts.insertions);
      match.gt = {ge.segment.line_id, span};
      match.pred = pe.segment;
    }

    const std::string parent = gt_is_pattern ? pe.segment.line_id : ge.segment.line_id;
    const bool remainder_is_gt = !gt_is_pattern;
    std::u32string prefix = text.substr(0, sg.text_begin);
    std::u32string suffix = text.substr(sg.text_end);
    ge.alive = false;
    pe.alive = false;
    result_.matches.push_back(std::move(match));
    repool(std::move(prefix), parent + ":a", remainder_is_gt);
    repool(std::move(suffix), parent + ":b", remainder_is_gt);
  }

  void repool(std::u32string piece, std::string id, bool is_gt) {
    std::size_t lead = 0;
    while (lead < piece.size() && piece[lead] == U' ') ++lead;
    std::size_t trail = 0;
    while (trail < piece.size() - lead && piece[piece.size() - 1 - trail] == U' ') ++trail;
    (is_gt ? result_.trimmed_gt_spaces : result_.trimmed_pred_spaces) += lead + trail;
    piece = piece.substr(lead, piece.size() - lead - trail);
    if (piece.empty()) return;
    if (piece.size() < params_.min_split_length) {
      (is_gt ? result_.unmatched_gt_chars : result_.unmatched_pred_chars) += piece.size();
      return;
    }
    (is_gt ? gt_ : pred_).push_back({FcaSegment{std::move(id), std::move(piece)}, true, nullptr});
  }

  static constexpr std::size_t kUnknown = static_cast<std::size_t>(-1);

  FcaParams params_;
  std::vector<PoolEntry> gt_;
  std::vector<PoolEntry> pred_;
  std::vector<std::vector<std::size_t>> distances_;
  FcaMatchSet result_;
};

std::vector<FcaSegment> segments_of(const PageAnnotation& page,
                                    const ingest::NormalizationPolicy& policy) {
  std::vector<FcaSegment> out;
  out.reserve(page.lines.size());
  for (const TextLine& line : page.lines) {
    out.push_back({line.id, ingest::normalize(ingest::to_u32(line.text), policy)});
  }
  return out;
}

}  // namespace

void FcaParams::validate() const {
  if (min_split_length < 1) throw Error("FCA min_split_length must be >= 1");
  if (!(max_match_penalty > 0.0 && max_match_penalty <= 1.0)) {
    throw Error("FCA max_match_penalty must lie in (0, 1]");
  }
}

AlignmentCounts FcaMatchSet::pooled() const {
  AlignmentCounts total;
  for (const auto& m : matches) total += m.counts;
  total.deletions += unmatched_gt_chars;
  total.insertions += unmatched_pred_chars;
  return total;
}

FcaResult fca_segments(std::vector<FcaSegment> gt, std::vector<FcaSegment> pred,
                       const FcaParams& params) {
  params.validate();
  FcaResult result;
  result.match_set = Matcher(std::move(gt), std::move(pred), params).run();
  MetricValue v = crr(result.match_set.pooled());
  v.value = std::clamp(v.value, 0.0, 1.0);
  result.value = v;
  return result;
}

FcaResult fca(const PageAnnotation& gt, const PageAnnotation& pred,
              const ingest::NormalizationPolicy& policy, const FcaParams& params) {
  return fca_segments(segments_of(gt, policy), segments_of(pred, policy), params);
}

}  // namespace ocreval::metrics
