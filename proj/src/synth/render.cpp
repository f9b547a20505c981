#include "ocreval/synth/render.hpp"

#include "ocreval/core/digest.hpp"
#include "ocreval/ingest/unicode.hpp"

namespace ocreval::synth {

namespace {
// Independent RNG streams per spec.
constexpr std::uint64_t kBackgroundStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
}  // namespace

nlohmann::json to_json(const SynthSpec& spec) {
  const DistortionParams& p = spec.params;
  return {
      {"text", spec.text},
      {"glyph_source", spec.glyph_source},
      {"seed", spec.seed},
      {"target_height", spec.target_height},
      {"target_width", spec.target_width},
      {"params",
       {{"blur_sigma", p.blur_sigma},
        {"skew_deg", p.skew_deg},
        {"shear_deg", p.shear_deg},
        {"noise", {{"kind", to_string(p.noise.kind)}, {"amount", p.noise.amount}}},
        {"background", to_string(p.background)},
        {"background_gray", p.background_gray},
        {"text_gray", p.text_gray},
        {"margins", {p.margins.top, p.margins.right, p.margins.bottom, p.margins.left}},
        {"extra_char_spacing_px", p.extra_char_spacing_px}}},
  };
}

SynthSpec spec_from_json(const nlohmann::json& j) {
  try {
    SynthSpec s;
    s.text = j.at("text").get<std::string>();
    s.glyph_source = j.at("glyph_source").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.target_height = j.at("target_height").get<std::size_t>();
    s.target_width = j.at("target_width").get<std::size_t>();
    const auto& p = j.at("params");
    s.params.blur_sigma = p.at("blur_sigma").get<double>();
    s.params.skew_deg = p.at("skew_deg").get<double>();
    s.params.shear_deg = p.at("shear_deg").get<double>();
    s.params.noise.kind = parse_noise_kind(p.at("noise").at("kind").get<std::string>());
    s.params.noise.amount = p.at("noise").at("amount").get<double>();
    s.params.background = parse_background_kind(p.at("background").get<std::string>());
    s.params.background_gray = p.at("background_gray").get<double>();
    s.params.text_gray = p.at("text_gray").get<double>();
    const auto& m = p.at("margins");
    s.params.margins = {m.at(0).get<int>(), m.at(1).get<int>(), m.at(2).get<int>(), m.at(3).get<int>()};
    s.params.extra_char_spacing_px = p.at("extra_char_spacing_px").get<int>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid synth spec: ") + e.what());
  }
}

std::string spec_digest(const SynthSpec& spec) { return sha256_hex(to_json(spec).dump()); }

GrayImage render_line(const SynthSpec& spec, const GlyphSource& glyphs,
                      const RenderOptions& options, RenderTrace* trace) {
  spec.params.validate();
  if (!spec.glyph_source.empty() && spec.glyph_source != glyphs.id()) {
    throw Error("spec wants glyph source '" + spec.glyph_source + "' but got '" + glyphs.id() + "'");
  }
  if (spec.target_height == 0 || spec.target_width == 0) throw Error("empty target size");
  const std::u32string text = ingest::to_u32(spec.text);
  if (text.empty()) throw Error("synth spec has empty text");

  const DistortionParams& p = spec.params;
  const GrayImage ink = typeset(text, glyphs, p.extra_char_spacing_px);
  if (ink.width() > options.max_typeset_width) {
    throw TextTooLong("typeset width " + std::to_string(ink.width()) + " px exceeds the cap of " +
                      std::to_string(options.max_typeset_width) + " px");
  }

  CounterRng bg_rng(derive_key(spec.seed, kBackgroundStream));
  const GrayImage background = make_background(p, ink, text, glyphs, bg_rng);
  const auto fill = static_cast<float>(background.mean());

  GrayImage image = composite(ink, background, static_cast<float>(p.text_gray));
  image = apply_affine(image, p.skew_deg, p.shear_deg, fill);
  if (trace) trace->after_geometry = image;
  image = gaussian_blur(image, p.blur_sigma);
  if (trace) trace->before_noise = image;

  CounterRng noise_rng(derive_key(spec.seed, kNoiseStream));
  NoiseStats stats;
  image = apply_noise(image, p.noise, noise_rng, &stats);
  if (trace) {
    trace->after_noise = image;
    trace->noise = stats;
    trace->fill = fill;
  }
  image = pad(image, p.margins, fill);
  return fit_to_size(image, spec.target_height, spec.target_width, fill);
}

}  // namespace ocreval::synth
