#include "ocreval/synth/sampler.hpp"

#include "ocreval/synth/rng.hpp"

namespace ocreval::synth {

namespace {
constexpr std::uint64_t kParamStream = 0;
constexpr std::uint64_t kRenderSeedStream = 1;
}  // namespace

void DistortionRanges::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("invalid distortion range: ") + what);
  };
  check(0.0 <= blur_sigma_min && blur_sigma_min <= blur_sigma_max && blur_sigma_max <= 3.0, "blur_sigma");
  check(-10.0 <= skew_min && skew_min <= skew_max && skew_max <= 10.0, "skew");
  check(-10.0 <= shear_min && shear_min <= shear_max && shear_max <= 10.0, "shear");
  check(!noise_kinds.empty(), "noise_kinds");
  check(0.0 <= gaussian_sigma_max && gaussian_sigma_max <= 0.1, "gaussian_sigma_max");
  check(0.0 <= salt_pepper_max && salt_pepper_max <= 0.05, "salt_pepper_max");
  check(!backgrounds.empty(), "backgrounds");
  check(0.0 <= background_gray_min && background_gray_min <= background_gray_max &&
            background_gray_max <= 1.0,
        "background_gray");
  check(0.0 <= text_gray_min && text_gray_min <= text_gray_max && text_gray_max <= 1.0, "text_gray");
  check(0 <= margin_max && margin_max <= 20, "margin_max");
  check(0 <= spacing_max && spacing_max <= 8, "spacing_max");
}

std::vector<SynthSpec> sample_specs(const std::vector<std::string>& corpus_lines, std::size_t n,
                                    std::uint64_t seed, const DistortionRanges& ranges,
                                    const std::string& glyph_source) {
  ranges.validate();
  std::vector<SynthSpec> specs;
  if (n == 0) return specs;
  if (corpus_lines.empty()) throw EmptyCorpus("sample_specs needs at least one corpus line");
  specs.reserve(n);

  const int last_line = static_cast<int>(corpus_lines.size()) - 1;
  for (std::size_t k = 0; k < n; ++k) {
    CounterRng rng(derive_key(seed, k, kParamStream));
    SynthSpec s;
    s.text = corpus_lines[static_cast<std::size_t>(rng.uniform_int(0, last_line))];
    s.glyph_source = glyph_source;
    s.seed = derive_key(seed, k, kRenderSeedStream);

    DistortionParams& p = s.params;
    p.blur_sigma = rng.uniform(ranges.blur_sigma_min, ranges.blur_sigma_max);
    p.skew_deg = rng.uniform(ranges.skew_min, ranges.skew_max);
    p.shear_deg = rng.uniform(ranges.shear_min, ranges.shear_max);

    const int noise_pick = rng.uniform_int(0, static_cast<int>(ranges.noise_kinds.size()) - 1);
    p.noise.kind = ranges.noise_kinds[static_cast<std::size_t>(noise_pick)];
    switch (p.noise.kind) {
      case NoiseKind::none: p.noise.amount = 0.0; break;
      case NoiseKind::gaussian: p.noise.amount = rng.uniform(0.0, ranges.gaussian_sigma_max); break;
      case NoiseKind::salt_pepper: p.noise.amount = rng.uniform(0.0, ranges.salt_pepper_max); break;
      case NoiseKind::dilate:
      case NoiseKind::erode: p.noise.amount = rng.uniform_int(1, 2); break;
    }

    const int bg_pick = rng.uniform_int(0, static_cast<int>(ranges.backgrounds.size()) - 1);
    p.background = ranges.backgrounds[static_cast<std::size_t>(bg_pick)];
    p.background_gray = rng.uniform(ranges.background_gray_min, ranges.background_gray_max);
    p.text_gray = rng.uniform(ranges.text_gray_min, ranges.text_gray_max);
    p.margins.top = rng.uniform_int(0, ranges.margin_max);
    p.margins.right = rng.uniform_int(0, ranges.margin_max);
    p.margins.bottom = rng.uniform_int(0, ranges.margin_max);
    p.margins.left = rng.uniform_int(0, ranges.margin_max);
    p.extra_char_spacing_px = rng.uniform_int(0, ranges.spacing_max);
    specs.push_back(std::move(s));
  }
  return specs;
}

}  // namespace ocreval::synth
