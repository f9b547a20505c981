#include "ocreval/stats/corpus_stats.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "ocreval/ingest/unicode.hpp"

namespace ocreval::stats {

namespace {

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string display_label(const std::string& label) {
  if (label == " ") return "<space>";
  if (label == "\n") return "<newline>";
  return label;
}

}  // namespace

Histogram char_frequency(const Corpus& corpus, const ingest::NormalizationPolicy& policy) {
  std::map<char32_t, std::size_t> counts;
  for (const auto& page : corpus.pages) {
    for (const auto& line : page.lines) {
      for (char32_t c : ingest::normalize(ingest::to_u32(line.text), policy)) ++counts[c];
    }
  }
  std::vector<std::pair<char32_t, std::size_t>> sorted(counts.begin(), counts.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Histogram h;
  for (const auto& [c, n] : sorted) {
    h.bins.emplace_back(ingest::to_utf8(std::u32string(1, c)), n);
    h.total += n;
  }
  return h;
}

Histogram words_per_line(const Corpus& corpus, const ingest::NormalizationPolicy& policy) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& page : corpus.pages) {
    for (const auto& line : page.lines) {
      std::size_t words = 0;
      bool in_word = false;
      for (char32_t c : ingest::normalize(ingest::to_u32(line.text), policy)) {
        const bool space = ingest::is_whitespace(c);
        if (!space && !in_word) ++words;
        in_word = !space;
      }
      ++counts[words];
    }
  }
  Histogram h;
  for (const auto& [words, n] : counts) {
    h.bins.emplace_back(std::to_string(words), n);
    h.total += n;
  }
  return h;
}

void write_csv(const Histogram& hist, std::ostream& out) {
  out << "label,count\n";
  for (const auto& [label, n] : hist.bins) out << quote_csv(label) << ',' << n << '\n';
}

void write_bars(const Histogram& hist, std::ostream& out, std::size_t width) {
  std::size_t peak = 0;
  std::size_t label_width = 0;
  for (const auto& [label, n] : hist.bins) {
    peak = std::max(peak, n);
    label_width = std::max(label_width, display_label(label).size());
  }
  for (const auto& [label, n] : hist.bins) {
    const std::string shown = display_label(label);
    const std::size_t bar = peak == 0 ? 0 : (n * width + peak - 1) / peak;
    out << shown << std::string(label_width - shown.size(), ' ') << " | "
        << std::string(bar, '#') << ' ' << n << '\n';
  }
  out << "total " << hist.total << '\n';
}

}  // namespace ocreval::stats
