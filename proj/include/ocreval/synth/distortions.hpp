#pragma once

#include <cstddef>
#include <string_view>

#include "ocreval/synth/glyph_atlas.hpp"
#include "ocreval/synth/image.hpp"
#include "ocreval/synth/rng.hpp"

namespace ocreval::synth {

enum class NoiseKind { none, gaussian, salt_pepper, dilate, erode };
enum class BackgroundKind { white, solid_color, ruled_lines, quasicrystal, reversed_blurred_text };

const char* to_string(NoiseKind kind);
const char* to_string(BackgroundKind kind);
NoiseKind parse_noise_kind(std::string_view name);
BackgroundKind parse_background_kind(std::string_view name);

/// `amount` is sigma for gaussian, flip probability for salt_pepper, and
/// the window radius (1 or 2) for dilate/erode. Dilation and erosion act on
/// the ink: dilate thickens strokes, erode thins them.
struct Noise {
  NoiseKind kind = NoiseKind::none;
  double amount = 0.0;

  friend bool operator==(const Noise&, const Noise&) = default;
};

struct Margins {
  int top = 0;
  int right = 0;
  int bottom = 0;
  int left = 0;

  friend bool operator==(const Margins&, const Margins&) = default;
};

struct DistortionParams {
  double blur_sigma = 0.0;  // [0, 3]
  double skew_deg = 0.0;    // [-10, 10], positive = counter-clockwise
  double shear_deg = 0.0;   // [-10, 10], positive = top leans right
  Noise noise;
  BackgroundKind background = BackgroundKind::white;
  double background_gray = 1.0;  // solid_color level, [0, 1]
  double text_gray = 0.0;        // ink level, [0, 1]
  Margins margins;               // each side [0, 20]
  int extra_char_spacing_px = 0;  // [0, 8]

  /// Throws ocreval::Error naming the first field outside its range.
  void validate() const;

  friend bool operator==(const DistortionParams&, const DistortionParams&) = default;
};

// Pipeline stages, in the order render_line applies them.

/// Coverage layer of `text` (1 = ink). Throws MissingGlyph.
GrayImage typeset(std::u32string_view text, const GlyphSource& glyphs, int extra_spacing);

/// Background layer the size of `ink`.
GrayImage make_background(const DistortionParams& params, const GrayImage& ink,
                          std::u32string_view text, const GlyphSource& glyphs, CounterRng& rng);

/// bg * (1 - coverage) + text_gray * coverage.
GrayImage composite(const GrayImage& ink, const GrayImage& background, float text_gray);

/// Rotation by skew, then shear, about the image center, bilinear sampling.
/// The canvas grows to the transformed bounding box; uncovered pixels get
/// `fill`. Identity angles return the input unchanged.
GrayImage apply_affine(const GrayImage& image, double skew_deg, double shear_deg, float fill);

/// Separable Gaussian, kernel radius ceil(3 * sigma), clamped borders.
GrayImage gaussian_blur(const GrayImage& image, double sigma);

struct NoiseStats {
  std::size_t pixels = 0;
  std::size_t touched = 0;  // pixels the noise process selected
};

GrayImage apply_noise(const GrayImage& image, const Noise& noise, CounterRng& rng,
                      NoiseStats* stats = nullptr);

GrayImage pad(const GrayImage& image, const Margins& margins, float fill);

/// Scales to `height` preserving aspect (area averaging when shrinking,
/// linear interpolation when enlarging), then right-pads with `fill` or
/// center-crops to `width`.
GrayImage fit_to_size(const GrayImage& image, std::size_t height, std::size_t width, float fill);

}  // namespace ocreval::synth
