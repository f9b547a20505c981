// Page builders shared by tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "ocreval/core/model.hpp"
#include "oracles.hpp"

namespace fixture {

inline ocreval::Polygon box(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

/// Lines stacked top to bottom in the given order, each with a box.
inline ocreval::PageAnnotation stacked_page(const std::string& id, const std::vector<std::string>& texts) {
  ocreval::PageAnnotation page;
  page.page_id = id;
  page.image_ref = id + ".png";
  page.width = 2000;
  page.height = 40 + 30 * static_cast<int>(texts.size());
  for (std::size_t k = 0; k < texts.size(); ++k) {
    const double y = 10 + 30 * static_cast<double>(k);
    page.lines.push_back({"l" + std::to_string(k), texts[k],
                          box(10, y, 10 + 8 * static_cast<double>(texts[k].size() + 1), y + 20),
                          static_cast<std::uint32_t>(k)});
  }
  return page;
}

/// Text-only prediction lines in the given order.
inline ocreval::PageAnnotation text_page(const std::string& id, const std::vector<std::string>& texts) {
  ocreval::PageAnnotation page;
  page.page_id = id;
  for (std::size_t k = 0; k < texts.size(); ++k) {
    page.lines.push_back({"p" + std::to_string(k), texts[k], std::nullopt, static_cast<std::uint32_t>(k)});
  }
  return page;
}

inline std::vector<std::string> random_lines(std::mt19937_64& rng, std::size_t n, std::size_t min_len,
                                             std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(oracle::random_line(rng, len(rng)));
  return out;
}

/// Same lines with order_index rewritten to follow `perm` (perm[k] = new
/// position of line k).
inline ocreval::PageAnnotation permuted(ocreval::PageAnnotation page, const std::vector<std::size_t>& perm) {
  for (std::size_t k = 0; k < page.lines.size(); ++k) page.lines[k].order_index = static_cast<std::uint32_t>(perm[k]);
  return page;
}

}  // namespace fixture
