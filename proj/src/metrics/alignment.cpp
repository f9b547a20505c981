#include "ocreval/metrics/alignment.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "ocreval/metrics/myers.hpp"

namespace ocreval::metrics {

namespace {

using Cell = std::uint32_t;
constexpr Cell kInf = std::numeric_limits<Cell>::max() / 4;

// Row-major DP storage holding, for row i, only columns
// [base(i), base(i) + width). Cells outside [i - band, i + band] are kInf.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t rows, std::size_t cols, std::size_t band)
      : cols_(cols), band_(band),
        width_(std::min(2 * band + 1, cols + 1)),
        data_((rows + 1) * width_, kInf) {}

  std::size_t lo(std::size_t i) const { return i > band_ ? i - band_ : 0; }
  std::size_t hi(std::size_t i) const { return std::min(cols_, i + band_); }

  Cell get(std::size_t i, std::size_t j) const {
    if (j < lo(i) || j > hi(i)) return kInf;
    return data_[i * width_ + (j - base(i))];
  }
  void set(std::size_t i, std::size_t j, Cell v) { data_[i * width_ + (j - base(i))] = v; }

 private:
  std::size_t base(std::size_t i) const {
    const std::size_t max_base = cols_ + 1 - width_;
    const std::size_t b = i > band_ ? i - band_ : 0;
    return std::min(b, max_base);
  }

  std::size_t cols_;
  std::size_t band_;
  std::size_t width_;
  std::vector<Cell> data_;
};

}  // namespace

AlignmentCounts align(std::u32string_view ref, std::u32string_view hyp) {
  AlignmentCounts counts;
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  if (n == 0 || m == 0) {
    counts.deletions = n;
    counts.insertions = m;
    return counts;
  }

  // The traceback always matches equal trailing characters first, so a
  // shared suffix can be counted without entering the matrix.
  std::size_t suffix = 0;
  while (suffix < n && suffix < m && ref[n - 1 - suffix] == hyp[m - 1 - suffix]) {
    ++suffix;
  }
  const std::u32string_view a = ref.substr(0, n - suffix);
  const std::u32string_view b = hyp.substr(0, m - suffix);
  counts.correct += suffix;
  if (a.empty() || b.empty()) {
    counts.deletions += a.size();
    counts.insertions += b.size();
    return counts;
  }

  const std::size_t rows = a.size();
  const std::size_t cols = b.size();
  const std::size_t distance = edit_distance(a, b);
  BandedMatrix dp(rows, cols, std::max<std::size_t>(distance, 1));

  for (std::size_t i = 0; i <= rows; ++i) {
    for (std::size_t j = dp.lo(i); j <= dp.hi(i); ++j) {
      Cell v;
      if (i == 0) {
        v = static_cast<Cell>(j);
      } else if (j == 0) {
        v = static_cast<Cell>(i);
      } else {
        const Cell diag = dp.get(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
        const Cell up = dp.get(i - 1, j) + 1;
        const Cell left = dp.get(i, j - 1) + 1;
        v = std::min({diag, up, left});
      }
      dp.set(i, j, v);
    }
  }

  std::size_t i = rows, j = cols;
  while (i > 0 || j > 0) {
    const Cell here = dp.get(i, j);
    if (i > 0 && j > 0) {
      const bool same = a[i - 1] == b[j - 1];
      const Cell diag = dp.get(i - 1, j - 1);
      if (same && diag == here) {
        ++counts.correct;
        --i;
        --j;
        continue;
      }
      if (!same && diag + 1 == here) {
        ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && dp.get(i - 1, j) + 1 == here) {
      ++counts.deletions;
      --i;
      continue;
    }
    ++counts.insertions;
    --j;
  }
  return counts;
}

SemiGlobalAlignment align_semi_global(std::u32string_view pattern,
                                      std::u32string_view text) {
  SemiGlobalAlignment out;
  const std::size_t m = pattern.size();
  const std::size_t n = text.size();
  if (m == 0) return out;
  if (n == 0) {
    out.distance = m;
    out.counts.deletions = m;
    return out;
  }

  const std::size_t stride = n + 1;
  std::vector<Cell> dp((m + 1) * stride);
  auto at = [&](std::size_t i, std::size_t j) -> Cell& { return dp[i * stride + j]; };
  for (std::size_t j = 0; j <= n; ++j) at(0, j) = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    at(i, 0) = static_cast<Cell>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      const Cell diag = at(i - 1, j - 1) + (pattern[i - 1] == text[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  std::size_t end = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    if (at(m, j) < at(m, end)) end = j;
  }
  out.distance = at(m, end);
  out.text_end = end;

  std::size_t i = m, j = end;
  while (i > 0) {
    const Cell here = at(i, j);
    if (j > 0) {
      const bool same = pattern[i - 1] == text[j - 1];
      const Cell diag = at(i - 1, j - 1);
      if (same && diag == here) {
        ++out.counts.correct;
        --i;
        --j;
        continue;
      }
      if (!same && diag + 1 == here) {
        ++out.counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (at(i - 1, j) + 1 == here) {
      ++out.counts.deletions;
      --i;
      continue;
    }
    ++out.counts.insertions;
    --j;
  }
  out.text_begin = j;
  return out;
}

}  // namespace ocreval::metrics
