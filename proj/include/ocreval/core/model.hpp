#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ocreval/core/errors.hpp"

namespace ocreval {

/// Raster coordinates in pixels: origin top-left, y grows downward.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

using Polygon = std::vector<Point2>;

struct TextLine {
  std::string id;
  std::string text;  // UTF-8
  std::optional<Polygon> polygon;
  std::uint32_t order_index = 0;

  friend bool operator==(const TextLine&, const TextLine&) = default;
};

struct PageAnnotation {
  std::string page_id;
  std::optional<std::string> image_ref;
  std::optional<int> width;
  std::optional<int> height;
  std::vector<TextLine> lines;

  friend bool operator==(const PageAnnotation&, const PageAnnotation&) = default;
};

struct Corpus {
  std::string name;
  std::vector<PageAnnotation> pages;

  const PageAnnotation* find(const std::string& page_id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Ground-truth pages must carry geometry; predictions may be text-only.
enum class PageKind { ground_truth, prediction };

enum class ViolationKind {
  duplicate_id,
  duplicate_order_index,
  degenerate_polygon,
  self_intersecting_polygon,
  out_of_bounds_vertex,
  non_finite_coordinate,
  missing_polygon,
  missing_dimensions,
  non_positive_dimensions,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string line_id;  // empty for page-level violations
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string describe(const Violation& v);

/// Every invariant breach of `page`; empty iff the page is valid for `kind`.
std::vector<Violation> validate_page(const PageAnnotation& page,
                                     PageKind kind = PageKind::prediction);

/// Corpus-level check: duplicate page ids plus every page's violations,
/// each detail prefixed with its page id.
std::vector<Violation> validate_corpus(const Corpus& corpus, PageKind kind);

/// Mean of the polygon vertices (vertex centroid, not area centroid).
/// Throws MissingGeometry when the polygon is absent or has < 3 vertices.
Point2 line_centroid(const TextLine& line);

/// Lines sorted by order_index (stable for equal indices).
std::vector<TextLine> lines_in_reading_order(const PageAnnotation& page);

}  // namespace ocreval
