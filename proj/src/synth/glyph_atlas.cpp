#include "ocreval/synth/glyph_atlas.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "ocreval/synth/png_io.hpp"

namespace ocreval::synth {

void GlyphSource::add(char32_t c, Glyph glyph) {
  if (glyph.advance <= 0) {
    throw Error("glyph U+" + std::to_string(static_cast<unsigned long>(c)) +
                " needs a positive advance");
  }
  if (static_cast<int>(glyph.coverage.height()) != line_height_) {
    throw Error("glyph cell height differs from the line height");
  }
  glyphs_[c] = std::move(glyph);
}

const Glyph& GlyphSource::glyph(char32_t c) const {
  if (auto it = glyphs_.find(c); it != glyphs_.end()) return it->second;
  if (fallback_) {
    if (auto it = glyphs_.find(*fallback_); it != glyphs_.end()) return it->second;
  }
  throw MissingGlyph("no glyph for code point " + std::to_string(static_cast<unsigned long>(c)) +
                     " in glyph source '" + id_ + "'");
}

GlyphSource load_atlas(const std::filesystem::path& dir) {
  const auto json_path = dir / "atlas.json";
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot open " + json_path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(json_path.string() + ": " + e.what());
  }

  try {
    const GrayImage sheet = read_png(dir / "atlas.png");
    GlyphSource source(j.at("id").get<std::string>(), j.at("line_height").get<int>());
    if (source.line_height() <= 0) throw ParseError(json_path.string() + ": bad line_height");
    for (const auto& [key, entry] : j.at("glyphs").items()) {
      const auto c = static_cast<char32_t>(std::stoul(key));
      const auto rect = entry.at("rect");
      const auto x0 = rect.at(0).get<std::size_t>();
      const auto y0 = rect.at(1).get<std::size_t>();
      const auto w = rect.at(2).get<std::size_t>();
      const auto h = rect.at(3).get<std::size_t>();
      if (x0 + w > sheet.width() || y0 + h > sheet.height()) {
        throw ParseError(json_path.string() + ": glyph " + key + " rect outside the sheet");
      }
      Glyph g;
      g.advance = entry.at("advance").get<int>();
      g.coverage = GrayImage(w, h, 0.0f);
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) g.coverage.at(x, y) = sheet.at(x0 + x, y0 + y);
      }
      source.add(c, std::move(g));
    }
    if (j.contains("fallback") && !j["fallback"].is_null()) {
      source.set_fallback(static_cast<char32_t>(j["fallback"].get<unsigned long>()));
    }
    return source;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(json_path.string() + ": " + e.what());
  } catch (const std::logic_error& e) {
    throw ParseError(json_path.string() + ": " + e.what());
  }
}

}  // namespace ocreval::synth
