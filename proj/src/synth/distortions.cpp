#include "ocreval/synth/distortions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace ocreval::synth {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require(bool ok, const char* what) {
  if (!ok) throw Error(std::string("distortion parameter out of range: ") + what);
}

// Output sample i draws from source pixels [start, start + weights.size()).
struct Tap {
  std::size_t start = 0;
  std::vector<float> weights;
};

std::vector<Tap> resample_taps(std::size_t src, std::size_t dst) {
  std::vector<Tap> taps(dst);
  const double scale = static_cast<double>(dst) / static_cast<double>(src);
  for (std::size_t i = 0; i < dst; ++i) {
    Tap& t = taps[i];
    if (dst < src) {
      const double lo = static_cast<double>(i) / scale;
      const double hi = static_cast<double>(i + 1) / scale;
      const auto first = static_cast<std::size_t>(std::floor(lo));
      const auto last = std::min(src - 1, static_cast<std::size_t>(std::ceil(hi)) - 1);
      t.start = first;
      double total = 0.0;
      for (std::size_t k = first; k <= last; ++k) {
        const double w = std::min(hi, static_cast<double>(k + 1)) - std::max(lo, static_cast<double>(k));
        t.weights.push_back(static_cast<float>(std::max(0.0, w)));
        total += std::max(0.0, w);
      }
      for (float& w : t.weights) w = static_cast<float>(w / total);
    } else {
      double pos = (static_cast<double>(i) + 0.5) / scale - 0.5;
      pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
      const auto k = static_cast<std::size_t>(std::floor(pos));
      const double frac = pos - static_cast<double>(k);
      t.start = k;
      if (frac == 0.0 || k + 1 >= src) {
        t.weights = {1.0f};
      } else {
        t.weights = {static_cast<float>(1.0 - frac), static_cast<float>(frac)};
      }
    }
  }
  return taps;
}

GrayImage resample(const GrayImage& in, std::size_t new_w, std::size_t new_h) {
  const auto xtaps = resample_taps(in.width(), new_w);
  const auto ytaps = resample_taps(in.height(), new_h);
  GrayImage horiz(new_w, in.height());
  for (std::size_t y = 0; y < in.height(); ++y) {
    for (std::size_t x = 0; x < new_w; ++x) {
      const Tap& t = xtaps[x];
      float acc = 0.0f;
      for (std::size_t k = 0; k < t.weights.size(); ++k) acc += t.weights[k] * in.at(t.start + k, y);
      horiz.at(x, y) = acc;
    }
  }
  GrayImage out(new_w, new_h);
  for (std::size_t y = 0; y < new_h; ++y) {
    const Tap& t = ytaps[y];
    for (std::size_t x = 0; x < new_w; ++x) {
      float acc = 0.0f;
      for (std::size_t k = 0; k < t.weights.size(); ++k) acc += t.weights[k] * horiz.at(x, t.start + k);
      out.at(x, y) = acc;
    }
  }
  return out;
}

GrayImage morphology(const GrayImage& in, int radius, bool take_min) {
  const auto r = static_cast<std::ptrdiff_t>(radius);
  const auto w = static_cast<std::ptrdiff_t>(in.width());
  const auto h = static_cast<std::ptrdiff_t>(in.height());
  auto pick = [take_min](float a, float b) { return take_min ? std::min(a, b) : std::max(a, b); };
  GrayImage horiz = in;
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      float v = in.at(x, y);
      for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, x - r); k <= std::min(w - 1, x + r); ++k) {
        v = pick(v, in.at(k, y));
      }
      horiz.at(x, y) = v;
    }
  }
  GrayImage out = horiz;
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      float v = horiz.at(x, y);
      for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, y - r); k <= std::min(h - 1, y + r); ++k) {
        v = pick(v, horiz.at(x, k));
      }
      out.at(x, y) = v;
    }
  }
  return out;
}

}  // namespace

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::salt_pepper: return "salt_pepper";
    case NoiseKind::dilate: return "dilate";
    case NoiseKind::erode: return "erode";
  }
  return "none";
}

const char* to_string(BackgroundKind kind) {
  switch (kind) {
    case BackgroundKind::white: return "white";
    case BackgroundKind::solid_color: return "solid_color";
    case BackgroundKind::ruled_lines: return "ruled_lines";
    case BackgroundKind::quasicrystal: return "quasicrystal";
    case BackgroundKind::reversed_blurred_text: return "reversed_blurred_text";
  }
  return "white";
}

NoiseKind parse_noise_kind(std::string_view name) {
  for (auto k : {NoiseKind::none, NoiseKind::gaussian, NoiseKind::salt_pepper, NoiseKind::dilate,
                 NoiseKind::erode}) {
    if (name == to_string(k)) return k;
  }
  throw Error("unknown noise kind '" + std::string(name) + "'");
}

BackgroundKind parse_background_kind(std::string_view name) {
  for (auto k : {BackgroundKind::white, BackgroundKind::solid_color, BackgroundKind::ruled_lines,
                 BackgroundKind::quasicrystal, BackgroundKind::reversed_blurred_text}) {
    if (name == to_string(k)) return k;
  }
  throw Error("unknown background kind '" + std::string(name) + "'");
}

void DistortionParams::validate() const {
  require(blur_sigma >= 0.0 && blur_sigma <= 3.0, "blur_sigma");
  require(skew_deg >= -10.0 && skew_deg <= 10.0, "skew_deg");
  require(shear_deg >= -10.0 && shear_deg <= 10.0, "shear_deg");
  switch (noise.kind) {
    case NoiseKind::none: break;
    case NoiseKind::gaussian: require(noise.amount >= 0.0 && noise.amount <= 0.1, "gaussian sigma"); break;
    case NoiseKind::salt_pepper: require(noise.amount >= 0.0 && noise.amount <= 0.05, "salt_pepper p"); break;
    case NoiseKind::dilate:
    case NoiseKind::erode: require(noise.amount == 1.0 || noise.amount == 2.0, "morphology radius"); break;
  }
  require(background_gray >= 0.0 && background_gray <= 1.0, "background_gray");
  require(text_gray >= 0.0 && text_gray <= 1.0, "text_gray");
  for (int m : {margins.top, margins.right, margins.bottom, margins.left}) {
    require(m >= 0 && m <= 20, "margin_px");
  }
  require(extra_char_spacing_px >= 0 && extra_char_spacing_px <= 8, "extra_char_spacing_px");
}

GrayImage typeset(std::u32string_view text, const GlyphSource& glyphs, int extra_spacing) {
  std::size_t width = 0;
  std::size_t pen = 0;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const Glyph& g = glyphs.glyph(text[k]);
    width = std::max(width, pen + g.coverage.width());
    pen += static_cast<std::size_t>(g.advance);
    if (k + 1 < text.size()) pen += static_cast<std::size_t>(extra_spacing);
  }
  width = std::max(width, pen);

  GrayImage ink(std::max<std::size_t>(width, 1), static_cast<std::size_t>(glyphs.line_height()), 0.0f);
  pen = 0;
  for (char32_t c : text) {
    const Glyph& g = glyphs.glyph(c);
    for (std::size_t y = 0; y < g.coverage.height(); ++y) {
      for (std::size_t x = 0; x < g.coverage.width(); ++x) {
        float& dst = ink.at(pen + x, y);
        dst = std::max(dst, g.coverage.at(x, y));
      }
    }
    pen += static_cast<std::size_t>(g.advance + extra_spacing);
  }
  return ink;
}

GrayImage make_background(const DistortionParams& params, const GrayImage& ink,
                          std::u32string_view text, const GlyphSource& glyphs, CounterRng& rng) {
  const std::size_t w = ink.width();
  const std::size_t h = ink.height();
  switch (params.background) {
    case BackgroundKind::white:
      return GrayImage(w, h, 1.0f);
    case BackgroundKind::solid_color:
      return GrayImage(w, h, static_cast<float>(params.background_gray));
    case BackgroundKind::ruled_lines: {
      GrayImage bg(w, h, 1.0f);
      const int spacing = rng.uniform_int(6, 12);
      const int offset = rng.uniform_int(0, spacing - 1);
      for (std::size_t y = 0; y < h; ++y) {
        if ((static_cast<int>(y) + offset) % spacing != 0) continue;
        for (std::size_t x = 0; x < w; ++x) bg.at(x, y) = 0.7f;
      }
      return bg;
    }
    case BackgroundKind::quasicrystal: {
      constexpr int kWaves = 7;
      const double wavelength = rng.uniform(6.0, 16.0);
      const double freq = 2.0 * std::numbers::pi / wavelength;
      std::array<double, kWaves> phase{}, cosines{}, sines{};
      for (int k = 0; k < kWaves; ++k) {
        phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double angle = std::numbers::pi * k / kWaves;
        cosines[k] = std::cos(angle) * freq;
        sines[k] = std::sin(angle) * freq;
      }
      GrayImage bg(w, h);
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
          double sum = 0.0;
          for (int k = 0; k < kWaves; ++k) {
            sum += std::cos(cosines[k] * static_cast<double>(x) + sines[k] * static_cast<double>(y) + phase[k]);
          }
          const double level = std::clamp(0.5 + 0.5 * sum / kWaves, 0.0, 1.0);
          bg.at(x, y) = static_cast<float>(0.55 + 0.45 * level);
        }
      }
      return bg;
    }
    case BackgroundKind::reversed_blurred_text: {
      const std::u32string reversed(text.rbegin(), text.rend());
      const GrayImage ghost =
          gaussian_blur(typeset(reversed, glyphs, params.extra_char_spacing_px), 1.5);
      GrayImage bg(w, h, 1.0f);
      for (std::size_t y = 0; y < std::min(h, ghost.height()); ++y) {
        for (std::size_t x = 0; x < std::min(w, ghost.width()); ++x) {
          bg.at(x, y) = 1.0f - 0.3f * ghost.at(x, y);
        }
      }
      return bg;
    }
  }
  return GrayImage(w, h, 1.0f);
}

GrayImage composite(const GrayImage& ink, const GrayImage& background, float text_gray) {
  GrayImage out(ink.width(), ink.height());
  for (std::size_t i = 0; i < out.pixels().size(); ++i) {
    const float c = ink.pixels()[i];
    out.pixels()[i] = background.pixels()[i] * (1.0f - c) + text_gray * c;
  }
  return out;
}

GrayImage apply_affine(const GrayImage& image, double skew_deg, double shear_deg, float fill) {
  if (skew_deg == 0.0 && shear_deg == 0.0) return image;
  const double ct = std::cos(skew_deg * kDegToRad);
  const double st = std::sin(skew_deg * kDegToRad);
  const double tsh = std::tan(shear_deg * kDegToRad);
  // y points down: rotation [[c, s], [-s, c]] turns the text counter-
  // clockwise on screen; shear [[1, -t], [0, 1]] pushes the top rightward.
  const double a = ct + tsh * st, b = st - tsh * ct, c = -st, d = ct;
  const double det = a * d - b * c;
  const double ia = d / det, ib = -b / det, ic = -c / det, id = a / det;

  const double w = static_cast<double>(image.width());
  const double h = static_cast<double>(image.height());
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (const auto& [px, py] : {std::pair{-w / 2, -h / 2}, std::pair{w / 2, -h / 2},
                               std::pair{-w / 2, h / 2}, std::pair{w / 2, h / 2}}) {
    const double x = a * px + b * py;
    const double y = c * px + d * py;
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  const auto out_w = static_cast<std::size_t>(std::ceil(max_x - min_x - 1e-9));
  const auto out_h = static_cast<std::size_t>(std::ceil(max_y - min_y - 1e-9));
  GrayImage out(out_w, out_h, fill);

  auto sample = [&](std::ptrdiff_t x, std::ptrdiff_t y) -> double {
    if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(image.width()) ||
        y >= static_cast<std::ptrdiff_t>(image.height())) {
      return fill;
    }
    return image.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  };

  const double ocx = static_cast<double>(out_w) / 2, ocy = static_cast<double>(out_h) / 2;
  for (std::size_t oy = 0; oy < out_h; ++oy) {
    for (std::size_t ox = 0; ox < out_w; ++ox) {
      const double qx = static_cast<double>(ox) + 0.5 - ocx;
      const double qy = static_cast<double>(oy) + 0.5 - ocy;
      const double sx = ia * qx + ib * qy + w / 2 - 0.5;
      const double sy = ic * qx + id * qy + h / 2 - 0.5;
      const double fx = std::floor(sx), fy = std::floor(sy);
      const double tx = sx - fx, ty = sy - fy;
      const auto x0 = static_cast<std::ptrdiff_t>(fx), y0 = static_cast<std::ptrdiff_t>(fy);
      const double top = sample(x0, y0) * (1 - tx) + sample(x0 + 1, y0) * tx;
      const double bottom = sample(x0, y0 + 1) * (1 - tx) + sample(x0 + 1, y0 + 1) * tx;
      out.at(ox, oy) = static_cast<float>(top * (1 - ty) + bottom * ty);
    }
  }
  return out;
}

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
  if (sigma <= 0.0 || image.empty()) return image;
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<float> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double v = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = static_cast<float>(v);
    total += v;
  }
  for (float& k : kernel) k = static_cast<float>(k / total);

  const auto w = static_cast<std::ptrdiff_t>(image.width());
  const auto h = static_cast<std::ptrdiff_t>(image.height());
  GrayImage horiz(image.width(), image.height());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const auto sx = std::clamp<std::ptrdiff_t>(x + i, 0, w - 1);
        acc += kernel[static_cast<std::size_t>(i + radius)] * image.at(sx, y);
      }
      horiz.at(x, y) = acc;
    }
  }
  GrayImage out(image.width(), image.height());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const auto sy = std::clamp<std::ptrdiff_t>(y + i, 0, h - 1);
        acc += kernel[static_cast<std::size_t>(i + radius)] * horiz.at(x, sy);
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

GrayImage apply_noise(const GrayImage& image, const Noise& noise, CounterRng& rng, NoiseStats* stats) {
  GrayImage out = image;
  std::size_t touched = 0;
  switch (noise.kind) {
    case NoiseKind::none:
      break;
    case NoiseKind::gaussian:
      for (float& v : out.pixels()) {
        v = std::clamp(static_cast<float>(v + noise.amount * rng.normal()), 0.0f, 1.0f);
      }
      touched = noise.amount > 0.0 ? out.pixels().size() : 0;
      break;
    case NoiseKind::salt_pepper:
      for (float& v : out.pixels()) {
        if (rng.uniform() < noise.amount) {
          v = rng.uniform() < 0.5 ? 0.0f : 1.0f;
          ++touched;
        }
      }
      break;
    case NoiseKind::dilate:
    case NoiseKind::erode:
      // Ink is dark: thickening it is a minimum filter.
      out = morphology(image, static_cast<int>(noise.amount), noise.kind == NoiseKind::dilate);
      for (std::size_t i = 0; i < out.pixels().size(); ++i) {
        if (out.pixels()[i] != image.pixels()[i]) ++touched;
      }
      break;
  }
  if (stats) {
    stats->pixels += out.pixels().size();
    stats->touched += touched;
  }
  return out;
}

GrayImage pad(const GrayImage& image, const Margins& m, float fill) {
  const auto l = static_cast<std::size_t>(m.left), t = static_cast<std::size_t>(m.top);
  GrayImage out(image.width() + l + static_cast<std::size_t>(m.right),
                image.height() + t + static_cast<std::size_t>(m.bottom), fill);
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) out.at(x + l, y + t) = image.at(x, y);
  }
  return out;
}

GrayImage fit_to_size(const GrayImage& image, std::size_t height, std::size_t width, float fill) {
  const double scale = static_cast<double>(height) / static_cast<double>(image.height());
  const auto scaled_w = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(static_cast<double>(image.width()) * scale)));
  const GrayImage scaled = (scaled_w == image.width() && height == image.height())
                               ? image
                               : resample(image, scaled_w, height);
  GrayImage out(width, height, fill);
  const std::size_t crop = scaled_w > width ? (scaled_w - width) / 2 : 0;
  const std::size_t copy_w = std::min(width, scaled_w);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < copy_w; ++x) out.at(x, y) = scaled.at(x + crop, y);
  }
  return out;
}

}  // namespace ocreval::synth
