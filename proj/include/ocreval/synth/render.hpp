#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "ocreval/synth/distortions.hpp"

namespace ocreval::synth {

class TextTooLong : public Error {
 public:
  using Error::Error;
};

/// Everything needed to render one line image; rendering is a pure
/// function of the spec and the glyph source.
struct SynthSpec {
  std::string text;          // UTF-8 label, never altered by rendering
  std::string glyph_source;  // id of the GlyphSource to render with
  DistortionParams params;
  std::uint64_t seed = 0;
  std::size_t target_height = 32;
  std::size_t target_width = 400;

  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

nlohmann::json to_json(const SynthSpec& spec);
SynthSpec spec_from_json(const nlohmann::json& j);

/// SHA-256 of the spec's canonical JSON.
std::string spec_digest(const SynthSpec& spec);

struct RenderOptions {
  std::size_t max_typeset_width = 4096;  // TextTooLong beyond this
};

/// Intermediate results, for inspection and measurement.
struct RenderTrace {
  GrayImage after_geometry;
  GrayImage before_noise;
  GrayImage after_noise;
  NoiseStats noise;
  float fill = 1.0f;
};

/// Stages: typeset -> background -> skew+shear -> blur -> noise -> margins
/// -> resize to target height, right-pad or center-crop to target width.
/// Throws MissingGlyph, TextTooLong, or ocreval::Error for invalid specs.
GrayImage render_line(const SynthSpec& spec, const GlyphSource& glyphs,
                      const RenderOptions& options = {}, RenderTrace* trace = nullptr);

}  // namespace ocreval::synth
