#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "ocreval/core/errors.hpp"
#include "ocreval/synth/image.hpp"

namespace ocreval::synth {

class MissingGlyph : public Error {
 public:
  using Error::Error;
};

/// A glyph cell: coverage in [0, 1] (1 = full ink), `line_height` rows
/// tall, drawn with its left edge at the pen position.
struct Glyph {
  GrayImage coverage;
  int advance = 0;
};

/// Pre-rasterized glyphs for one font at one size.
class GlyphSource {
 public:
  GlyphSource() = default;
  GlyphSource(std::string id, int line_height) : id_(std::move(id)), line_height_(line_height) {}

  const std::string& id() const { return id_; }
  int line_height() const { return line_height_; }

  /// Throws ocreval::Error for a non-positive advance or wrong cell height.
  void add(char32_t c, Glyph glyph);
  void set_fallback(char32_t c) { fallback_ = c; }
  std::optional<char32_t> fallback() const { return fallback_; }

  bool has(char32_t c) const { return glyphs_.count(c) != 0; }
  /// The glyph for `c`, else the fallback glyph; throws MissingGlyph.
  const Glyph& glyph(char32_t c) const;
  std::size_t size() const { return glyphs_.size(); }

 private:
  std::string id_;
  int line_height_ = 0;
  std::map<char32_t, Glyph> glyphs_;
  std::optional<char32_t> fallback_;
};

/// Loads `atlas.json` and `atlas.png` from `dir`.
///
/// atlas.json: {"id": str, "line_height": int, "fallback": int|null,
///              "glyphs": {"<code point>": {"rect": [x, y, w, h], "advance": int}}}
/// atlas.png: grayscale sheet whose value is the glyph coverage.
GlyphSource load_atlas(const std::filesystem::path& dir);

}  // namespace ocreval::synth
