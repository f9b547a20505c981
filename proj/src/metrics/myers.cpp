#include "ocreval/metrics/myers.hpp"

#include <algorithm>

namespace ocreval::metrics {

namespace {

using Word = std::uint64_t;
constexpr Word kHighBit = Word{1} << 63;

struct Block {
  Word pv = ~Word{0};
  Word mv = 0;
};

// Advances one 64-row block by one text column. `hin` is the horizontal
// delta entering from above; returns the delta leaving the bottom row.
// `ph_raw`/`mh_raw` receive the unshifted horizontal delta vectors.
inline int advance(Block& b, Word eq, int hin, Word& ph_raw, Word& mh_raw) {
  const Word hin_neg = hin < 0 ? 1 : 0;
  const Word xv = eq | b.mv;
  eq |= hin_neg;
  const Word xh = (((eq & b.pv) + b.pv) ^ b.pv) | eq;
  Word ph = b.mv | ~(xh | b.pv);
  Word mh = b.pv & xh;
  ph_raw = ph;
  mh_raw = mh;
  int hout = 0;
  if (ph & kHighBit) hout = 1;
  if (mh & kHighBit) hout = -1;
  ph <<= 1;
  mh <<= 1;
  if (hin < 0) mh |= 1;
  if (hin > 0) ph |= 1;
  b.pv = mh | ~(xv | ph);
  b.mv = ph & xv;
  return hout;
}

}  // namespace

MyersPattern::MyersPattern(std::u32string_view pattern)
    : length_(pattern.size()), blocks_((pattern.size() + 63) / 64) {
  ascii_symbol_.fill(-1);
  for (char32_t c : pattern) {
    if (c >= 128) alphabet_.push_back(c);
  }
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());

  std::int32_t next_symbol = static_cast<std::int32_t>(alphabet_.size());
  for (char32_t c : pattern) {
    if (c < 128 && ascii_symbol_[c] < 0) ascii_symbol_[c] = next_symbol++;
  }
  const auto symbols = static_cast<std::size_t>(next_symbol);
  peq_.assign((symbols + 1) * blocks_, 0);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const char32_t c = pattern[i];
    std::size_t sym;
    if (c < 128) {
      sym = static_cast<std::size_t>(ascii_symbol_[c]);
    } else {
      sym = static_cast<std::size_t>(
          std::lower_bound(alphabet_.begin(), alphabet_.end(), c) - alphabet_.begin());
    }
    peq_[sym * blocks_ + i / 64] |= Word{1} << (i % 64);
  }
}

const MyersPattern::Word* MyersPattern::equality_row(char32_t c) const {
  const std::size_t zero_row = peq_.size() - blocks_;
  if (c < 128) {
    const std::int32_t sym = ascii_symbol_[c];
    return peq_.data() + (sym < 0 ? zero_row : static_cast<std::size_t>(sym) * blocks_);
  }
  auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), c);
  if (it == alphabet_.end() || *it != c) return peq_.data() + zero_row;
  return peq_.data() + static_cast<std::size_t>(it - alphabet_.begin()) * blocks_;
}

std::size_t MyersPattern::scan(std::u32string_view text, bool free_text_ends) const {
  if (length_ == 0) return free_text_ends ? 0 : text.size();

  std::vector<Block> blocks(blocks_);
  const unsigned last_bit = static_cast<unsigned>((length_ - 1) % 64);
  long long score = static_cast<long long>(length_);  // D[m][0]
  long long best = score;

  for (char32_t c : text) {
    const Word* eq = equality_row(c);
    int hin = free_text_ends ? 0 : 1;
    Word ph = 0, mh = 0;
    for (std::size_t b = 0; b < blocks_; ++b) {
      hin = advance(blocks[b], eq[b], hin, ph, mh);
    }
    score += static_cast<long long>((ph >> last_bit) & 1) -
             static_cast<long long>((mh >> last_bit) & 1);
    best = std::min(best, score);
  }
  return static_cast<std::size_t>(free_text_ends ? best : score);
}

std::size_t MyersPattern::global_distance(std::u32string_view text) const {
  return scan(text, false);
}

std::size_t MyersPattern::semi_global_distance(std::u32string_view text) const {
  return scan(text, true);
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Shorter string as the pattern keeps the block count low.
  return MyersPattern(b).global_distance(a);
}

}  // namespace ocreval::metrics
