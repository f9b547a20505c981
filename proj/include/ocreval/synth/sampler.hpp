#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocreval/synth/render.hpp"

namespace ocreval::synth {

/// Sampling bounds. Every parameter is drawn uniformly within its bounds;
/// kinds are drawn uniformly from the enabled lists.
struct DistortionRanges {
  double blur_sigma_min = 0.0, blur_sigma_max = 1.5;
  double skew_min = -10.0, skew_max = 10.0;
  double shear_min = -10.0, shear_max = 10.0;
  std::vector<NoiseKind> noise_kinds{NoiseKind::none, NoiseKind::gaussian, NoiseKind::salt_pepper,
                                     NoiseKind::dilate, NoiseKind::erode};
  double gaussian_sigma_max = 0.1;
  double salt_pepper_max = 0.05;
  std::vector<BackgroundKind> backgrounds{BackgroundKind::white, BackgroundKind::solid_color,
                                          BackgroundKind::ruled_lines, BackgroundKind::quasicrystal,
                                          BackgroundKind::reversed_blurred_text};
  double background_gray_min = 0.6, background_gray_max = 1.0;
  double text_gray_min = 0.0, text_gray_max = 0.4;
  int margin_max = 20;
  int spacing_max = 8;

  /// Throws ocreval::Error when a bound leaves the DistortionParams range.
  void validate() const;
};

/// `n` specs; spec k depends only on (seed, k) and the inputs, through a
/// counter-based stream. Throws EmptyCorpus when `corpus_lines` is empty
/// and n > 0.
std::vector<SynthSpec> sample_specs(const std::vector<std::string>& corpus_lines, std::size_t n,
                                    std::uint64_t seed, const DistortionRanges& ranges = {},
                                    const std::string& glyph_source = "");

}  // namespace ocreval::synth
