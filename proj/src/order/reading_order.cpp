#include "ocreval/order/reading_order.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "ocreval/ingest/unicode.hpp"
#include "ocreval/metrics/myers.hpp"

namespace ocreval::order {

namespace {

struct LineGeometry {
  std::size_t index = 0;
  double top = 0.0;
  double bottom = 0.0;
  Point2 centroid;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

bool share_row(const LineGeometry& a, const LineGeometry& b, double threshold) {
  const double overlap = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  const double smaller = std::min(a.bottom - a.top, b.bottom - b.top);
  if (smaller <= 0.0) return overlap >= 0.0;
  return overlap >= threshold * smaller;
}

PageAnnotation with_order(const PageAnnotation& page, const std::vector<std::size_t>& sequence) {
  PageAnnotation out = page;
  for (std::size_t pos = 0; pos < sequence.size(); ++pos) {
    out.lines[sequence[pos]].order_index = static_cast<std::uint32_t>(pos);
  }
  return out;
}

}  // namespace

const char* to_string(OrderingKind kind) {
  switch (kind) {
    case OrderingKind::as_is: return "as_is";
    case OrderingKind::blind_centroid: return "blind";
    case OrderingKind::reference_guided: return "ref";
  }
  return "as_is";
}

OrderingKind parse_ordering_kind(std::string_view name) {
  if (name == "as_is") return OrderingKind::as_is;
  if (name == "blind" || name == "blind_centroid") return OrderingKind::blind_centroid;
  if (name == "ref" || name == "reference_guided") return OrderingKind::reference_guided;
  throw Error("unknown ordering strategy '" + std::string(name) +
              "' (expected as_is, blind or ref)");
}

void OrderingStrategy::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error("tau must lie in [0, 1]");
  if (!(row_overlap_threshold > 0.0 && row_overlap_threshold <= 1.0)) {
    throw Error("row overlap threshold must lie in (0, 1]");
  }
}

PageAnnotation order_blind(const PageAnnotation& page, double row_overlap_threshold) {
  const std::size_t n = page.lines.size();
  std::vector<LineGeometry> geo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TextLine& line = page.lines[i];
    geo[i].index = i;
    geo[i].centroid = line_centroid(line);
    geo[i].top = std::numeric_limits<double>::infinity();
    geo[i].bottom = -std::numeric_limits<double>::infinity();
    for (const Point2& p : *line.polygon) {
      geo[i].top = std::min(geo[i].top, p.y);
      geo[i].bottom = std::max(geo[i].bottom, p.y);
    }
  }

  DisjointSets rows(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (share_row(geo[a], geo[b], row_overlap_threshold)) rows.unite(a, b);
    }
  }

  struct Row {
    std::vector<std::size_t> members;
    double mean_y = 0.0;
    double min_x = 0.0;
  };
  std::vector<Row> grouped;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = rows.find(i);
    if (slot[root] == n) {
      slot[root] = grouped.size();
      grouped.emplace_back();
    }
    grouped[slot[root]].members.push_back(i);
  }

  auto by_x = [&](std::size_t a, std::size_t b) {
    const Point2& ca = geo[a].centroid;
    const Point2& cb = geo[b].centroid;
    if (ca.x != cb.x) return ca.x < cb.x;
    if (ca.y != cb.y) return ca.y < cb.y;
    return page.lines[a].id < page.lines[b].id;
  };
  for (Row& row : grouped) {
    std::sort(row.members.begin(), row.members.end(), by_x);
    double sum = 0.0;
    for (std::size_t m : row.members) sum += geo[m].centroid.y;
    row.mean_y = sum / static_cast<double>(row.members.size());
    row.min_x = geo[row.members.front()].centroid.x;
  }
  std::sort(grouped.begin(), grouped.end(), [&](const Row& a, const Row& b) {
    if (a.mean_y != b.mean_y) return a.mean_y < b.mean_y;
    if (a.min_x != b.min_x) return a.min_x < b.min_x;
    return page.lines[a.members.front()].id < page.lines[b.members.front()].id;
  });

  std::vector<std::size_t> sequence;
  sequence.reserve(n);
  for (const Row& row : grouped) {
    sequence.insert(sequence.end(), row.members.begin(), row.members.end());
  }
  return with_order(page, sequence);
}

ReorderResult order_by_reference(const PageAnnotation& reference, const PageAnnotation& pred,
                                 double tau, const ingest::NormalizationPolicy& policy) {
  ReorderResult result;
  result.page = pred;
  if (reference.lines.empty() || pred.lines.empty()) return result;

  // Prediction lines in their current order, as indices into pred.lines.
  std::vector<std::size_t> current(pred.lines.size());
  std::iota(current.begin(), current.end(), std::size_t{0});
  std::stable_sort(current.begin(), current.end(), [&](std::size_t a, std::size_t b) {
    return pred.lines[a].order_index < pred.lines[b].order_index;
  });

  std::vector<std::u32string> pred_text(pred.lines.size());
  for (std::size_t j = 0; j < pred.lines.size(); ++j) {
    pred_text[j] = ingest::normalize(ingest::to_u32(pred.lines[j].text), policy);
  }
  std::vector<bool> accepted(pred.lines.size(), false);

  const std::vector<TextLine> ref_lines = lines_in_reading_order(reference);
  for (std::size_t i = 0; i < ref_lines.size(); ++i) {
    const std::u32string r = ingest::normalize(ingest::to_u32(ref_lines[i].text), policy);
    const metrics::MyersPattern pattern(r);

    std::size_t best_pos = current.size();
    std::size_t best_distance = 0;
    for (std::size_t pos = 0; pos < current.size(); ++pos) {
      const std::size_t j = current[pos];
      if (accepted[j]) continue;
      const std::size_t d = pattern.global_distance(pred_text[j]);
      if (best_pos == current.size() || d < best_distance) {
        best_pos = pos;
        best_distance = d;
      }
    }
    if (best_pos == current.size()) break;  // every prediction line placed

    const std::size_t j = current[best_pos];
    const std::size_t longest = std::max(r.size(), pred_text[j].size());
    const double similarity =
        longest == 0 ? 1.0
                     : 1.0 - static_cast<double>(best_distance) / static_cast<double>(longest);
    const bool accept = similarity >= tau;
    result.trace.push_back({i, j, similarity, accept});
    if (!accept) continue;

    accepted[j] = true;
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(best_pos));
    const std::size_t target = std::min(i, current.size());
    current.insert(current.begin() + static_cast<std::ptrdiff_t>(target), j);
  }

  std::stable_partition(current.begin(), current.end(),
                        [&](std::size_t j) { return accepted[j]; });
  result.page = with_order(pred, current);
  return result;
}

PageAnnotation apply_strategy(const OrderingStrategy& strategy, const PageAnnotation& pred,
                              const PageAnnotation* reference,
                              const ingest::NormalizationPolicy& policy) {
  switch (strategy.kind) {
    case OrderingKind::as_is:
      return pred;
    case OrderingKind::blind_centroid:
      return order_blind(pred, strategy.row_overlap_threshold);
    case OrderingKind::reference_guided:
      if (reference == nullptr) return pred;
      return order_by_reference(*reference, pred, strategy.tau, policy).page;
  }
  return pred;
}

}  // namespace ocreval::order
