#include "ocreval/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ocreval {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(const Point2& p, const Point2& a, const Point2& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection, touching included.
bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1,
                        const Point2& q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(p1, q1, q2)) return true;
  if (d2 == 0 && on_segment(p2, q1, q2)) return true;
  if (d3 == 0 && on_segment(q1, p1, p2)) return true;
  if (d4 == 0 && on_segment(q2, p1, p2)) return true;
  return false;
}

double twice_signed_area(const Polygon& poly) {
  double acc = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    acc += a.x * b.y - b.x * a.y;
  }
  return acc;
}

bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const bool adjacent = (k == i + 1) || (i == 0 && k == n - 1);
      if (adjacent) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[k],
                             poly[(k + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

void check_polygon(const TextLine& line, const PageAnnotation& page,
                   std::vector<Violation>& out) {
  const Polygon& poly = *line.polygon;
  for (const Point2& p : poly) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      out.push_back({ViolationKind::non_finite_coordinate, line.id,
                     "polygon has a non-finite coordinate"});
      return;
    }
  }
  if (poly.size() < 3) {
    out.push_back({ViolationKind::degenerate_polygon, line.id,
                   "polygon has " + std::to_string(poly.size()) +
                       " vertices (need >= 3)"});
    return;
  }
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (poly[i] == poly[(i + 1) % poly.size()]) {
      out.push_back({ViolationKind::degenerate_polygon, line.id,
                     "polygon repeats vertex " + std::to_string(i)});
      return;
    }
  }
  if (twice_signed_area(poly) == 0.0) {
    out.push_back(
        {ViolationKind::degenerate_polygon, line.id, "polygon has zero area"});
    return;
  }
  if (!is_simple(poly)) {
    out.push_back({ViolationKind::self_intersecting_polygon, line.id,
                   "polygon edges intersect"});
  }
  if (page.width && page.height) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point2& p = poly[i];
      if (p.x < 0.0 || p.y < 0.0 || p.x > *page.width || p.y > *page.height) {
        std::ostringstream msg;
        msg << "vertex " << i << " (" << p.x << ", " << p.y
            << ") outside page " << *page.width << "x" << *page.height;
        out.push_back(
            {ViolationKind::out_of_bounds_vertex, line.id, msg.str()});
      }
    }
  }
}

}  // namespace

const PageAnnotation* Corpus::find(const std::string& page_id) const {
  for (const auto& page : pages) {
    if (page.page_id == page_id) return &page;
  }
  return nullptr;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::duplicate_id: return "DuplicateId";
    case ViolationKind::duplicate_order_index: return "DuplicateOrderIndex";
    case ViolationKind::degenerate_polygon: return "DegeneratePolygon";
    case ViolationKind::self_intersecting_polygon: return "SelfIntersectingPolygon";
    case ViolationKind::out_of_bounds_vertex: return "OutOfBoundsVertex";
    case ViolationKind::non_finite_coordinate: return "NonFiniteCoordinate";
    case ViolationKind::missing_polygon: return "MissingPolygon";
    case ViolationKind::missing_dimensions: return "MissingDimensions";
    case ViolationKind::non_positive_dimensions: return "NonPositiveDimensions";
  }
  return "Unknown";
}

std::string describe(const Violation& v) {
  std::string out = to_string(v.kind);
  if (!v.line_id.empty()) out += " [line " + v.line_id + "]";
  if (!v.detail.empty()) out += ": " + v.detail;
  return out;
}

std::vector<Violation> validate_page(const PageAnnotation& page,
                                     PageKind kind) {
  std::vector<Violation> out;

  if ((page.width && *page.width <= 0) || (page.height && *page.height <= 0)) {
    out.push_back({ViolationKind::non_positive_dimensions, "",
                   "page width and height must be positive"});
  }
  if (kind == PageKind::ground_truth && (!page.width || !page.height)) {
    out.push_back({ViolationKind::missing_dimensions, "",
                   "ground-truth pages need width and height"});
  }

  std::set<std::string> ids;
  std::set<std::uint32_t> indices;
  for (const TextLine& line : page.lines) {
    if (!ids.insert(line.id).second) {
      out.push_back({ViolationKind::duplicate_id, line.id, "id repeated"});
    }
    if (!indices.insert(line.order_index).second) {
      out.push_back({ViolationKind::duplicate_order_index, line.id,
                     "order_index " + std::to_string(line.order_index) +
                         " repeated"});
    }
    if (line.polygon) {
      check_polygon(line, page, out);
    } else if (kind == PageKind::ground_truth) {
      out.push_back({ViolationKind::missing_polygon, line.id,
                     "ground-truth lines need a polygon"});
    }
  }
  return out;
}

std::vector<Violation> validate_corpus(const Corpus& corpus, PageKind kind) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const auto& page : corpus.pages) {
    if (!seen.insert(page.page_id).second) {
      out.push_back({ViolationKind::duplicate_id, "",
                     "page_id " + page.page_id + " repeated"});
    }
    for (Violation v : validate_page(page, kind)) {
      v.detail = "page " + page.page_id + ": " + v.detail;
      out.push_back(std::move(v));
    }
  }
  return out;
}

Point2 line_centroid(const TextLine& line) {
  if (!line.polygon || line.polygon->size() < 3) {
    throw MissingGeometry("line '" + line.id +
                          "' has no polygon with at least 3 vertices");
  }
  Point2 c;
  for (const Point2& p : *line.polygon) {
    c.x += p.x;
    c.y += p.y;
  }
  const auto n = static_cast<double>(line.polygon->size());
  return {c.x / n, c.y / n};
}

std::vector<TextLine> lines_in_reading_order(const PageAnnotation& page) {
  std::vector<TextLine> lines = page.lines;
  std::stable_sort(lines.begin(), lines.end(),
                   [](const TextLine& a, const TextLine& b) {
                     return a.order_index < b.order_index;
                   });
  return lines;
}

}  // namespace ocreval
