#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ocreval/core/model.hpp"
#include "ocreval/ingest/normalize.hpp"

namespace ocreval::stats {

struct Histogram {
  std::vector<std::pair<std::string, std::size_t>> bins;  // label -> count
  std::size_t total = 0;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

/// Count of every character of every normalized line. Bins are ordered by
/// descending count, then ascending code point.
Histogram char_frequency(const Corpus& corpus, const ingest::NormalizationPolicy& policy);

/// Words per line, a word being a maximal run of non-space characters in
/// the normalized text. Bins are keyed by the word count, ascending.
Histogram words_per_line(const Corpus& corpus, const ingest::NormalizationPolicy& policy);

/// `label,count` rows after a `label,count` header. Labels that contain a
/// comma, quote, or line break are quoted.
void write_csv(const Histogram& hist, std::ostream& out);

/// Horizontal bar chart for terminals, scaled to `width` columns.
void write_bars(const Histogram& hist, std::ostream& out, std::size_t width = 50);

}  // namespace ocreval::stats
