#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ocreval/ingest/unicode.hpp"
#include "ocreval/synth/dataset.hpp"
#include "ocreval/synth/distortions.hpp"
#include "ocreval/synth/glyph_atlas.hpp"
#include "ocreval/synth/png_io.hpp"
#include "ocreval/synth/render.hpp"
#include "ocreval/synth/rng.hpp"
#include "ocreval/synth/sampler.hpp"

using namespace ocreval;
using namespace ocreval::synth;
namespace fs = std::filesystem;

namespace {

const GlyphSource& atlas() {
  static const GlyphSource g = load_atlas(OCREVAL_FIXTURES "/atlas");
  return g;
}

SynthSpec plain_spec(const std::string& text) {
  SynthSpec s;
  s.text = text;
  s.glyph_source = atlas().id();
  return s;
}

/// Ink orientation in degrees, counter-clockwise positive, from the
/// second moments of (fill - value) weights.
double principal_angle(const GrayImage& img, float fill) {
  double w = 0, mx = 0, my = 0;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      const double v = std::max(0.0, static_cast<double>(fill - img.at(x, y)));
      w += v;
      mx += v * static_cast<double>(x);
      my += v * static_cast<double>(y);
    }
  }
  mx /= w;
  my /= w;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      const double v = std::max(0.0, static_cast<double>(fill - img.at(x, y)));
      const double dx = static_cast<double>(x) - mx, dy = static_cast<double>(y) - my;
      sxx += v * dx * dx;
      syy += v * dy * dy;
      sxy += v * dx * dy;
    }
  }
  const double theta = 0.5 * std::atan2(2 * sxy, sxx - syy);
  return -theta * 180.0 / std::acos(-1.0);  // image y grows downwards
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("atlas fixture loads") {
  CHECK(atlas().size() == 95);
  CHECK(atlas().has(U'A'));
  CHECK_FALSE(atlas().has(U'é'));
  CHECK_THROWS_AS(atlas().glyph(U'é'), MissingGlyph);
  GlyphSource copy = atlas();
  copy.set_fallback(U'?');
  CHECK(copy.glyph(U'é').advance == copy.glyph(U'?').advance);
}

TEST_CASE("identity distortions reduce to typeset and resize") {
  const auto spec = plain_spec("Hello, world");
  const auto img = render_line(spec, atlas());
  const auto ink = typeset(ingest::to_u32(spec.text), atlas(), 0);
  const auto expected = fit_to_size(composite(ink, GrayImage(ink.width(), ink.height(), 1.0f), 0.0f), 32, 400, 1.0f);
  CHECK(img == expected);
  CHECK(img.width() == 400);
  CHECK(img.height() == 32);
}

TEST_CASE("rendering is deterministic") {
  auto spec = plain_spec("Determinism 123");
  spec.params.noise = {NoiseKind::gaussian, 0.05};
  spec.params.background = BackgroundKind::quasicrystal;
  spec.params.blur_sigma = 0.7;
  spec.params.skew_deg = 3;
  spec.seed = 42;
  const auto a = render_line(spec, atlas());
  CHECK(a == render_line(spec, atlas()));
  spec.seed = 43;
  CHECK_FALSE(a == render_line(spec, atlas()));
}

TEST_CASE("a 10 degree skew measures as 10 degrees") {
  for (const double skew : {10.0, -10.0, 4.0}) {
    auto spec = plain_spec("The quick brown fox jumps over the lazy dog");
    spec.params.skew_deg = skew;
    const auto img = render_line(spec, atlas());
    CHECK(std::abs(principal_angle(img, 1.0f) - skew) <= 0.5);
  }
  const auto flat = render_line(plain_spec("The quick brown fox jumps over the lazy dog"), atlas());
  CHECK(std::abs(principal_angle(flat, 1.0f)) <= 0.5);
}

TEST_CASE("salt and pepper flips at the requested rate") {
  auto spec = plain_spec("Salt and pepper noise test line");
  spec.params.noise = {NoiseKind::salt_pepper, 0.05};
  spec.params.background = BackgroundKind::solid_color;
  spec.params.background_gray = 0.8;
  RenderTrace trace;
  render_line(spec, atlas(), {}, &trace);
  const auto& before = trace.before_noise.pixels();
  const auto& after = trace.after_noise.pixels();
  std::size_t changed = 0;
  double exposure = 0;
  for (std::size_t k = 0; k < before.size(); ++k) {
    changed += before[k] != after[k];
    exposure += (before[k] == 0.0f || before[k] == 1.0f) ? 0.5 : 1.0;
  }
  CHECK(static_cast<double>(changed) / exposure == doctest::Approx(0.05).epsilon(0.2));
  CHECK(static_cast<double>(trace.noise.touched) / static_cast<double>(trace.noise.pixels) ==
        doctest::Approx(0.05).epsilon(0.2));
}

TEST_CASE("dilate thickens ink and erode thins it") {
  const auto ink = typeset(U"Morphology", atlas(), 0);
  const auto img = composite(ink, GrayImage(ink.width(), ink.height(), 1.0f), 0.0f);
  CounterRng rng(1);
  const auto thick = apply_noise(img, {NoiseKind::dilate, 1}, rng);
  const auto thin = apply_noise(img, {NoiseKind::erode, 1}, rng);
  CHECK(thick.mean() < img.mean());
  CHECK(thin.mean() > img.mean());
}

TEST_CASE("blur keeps flat images flat") {
  const GrayImage flat(20, 10, 0.25f);
  const auto blurred = gaussian_blur(flat, 1.3);
  for (float v : blurred.pixels()) CHECK(v == doctest::Approx(0.25f));
  CHECK(gaussian_blur(flat, 0.0) == flat);
}

TEST_CASE("affine keeps identity and grows the canvas") {
  const auto ink = typeset(U"Rotate", atlas(), 0);
  CHECK(apply_affine(ink, 0, 0, 0.0f) == ink);
  const auto rotated = apply_affine(ink, 10, 0, 0.0f);
  CHECK(rotated.height() > ink.height());
  const auto sheared = apply_affine(ink, 0, 10, 0.0f);
  CHECK(sheared.width() > ink.width());
}

TEST_CASE("fit_to_size pads and crops") {
  const GrayImage small(10, 16, 0.0f);
  const auto padded = fit_to_size(small, 32, 400, 1.0f);
  CHECK(padded.width() == 400);
  CHECK(padded.height() == 32);
  CHECK(padded.at(0, 0) == 0.0f);
  CHECK(padded.at(399, 0) == 1.0f);
  const GrayImage wide(2000, 32, 0.5f);
  const auto cropped = fit_to_size(wide, 32, 400, 1.0f);
  CHECK(cropped.width() == 400);
  CHECK(cropped.at(200, 10) == 0.5f);
}

TEST_CASE("invalid specs") {
  auto spec = plain_spec("x");
  spec.params.skew_deg = 11;
  CHECK_THROWS_AS(render_line(spec, atlas()), Error);
  spec = plain_spec("x");
  spec.glyph_source = "other-font";
  CHECK_THROWS_AS(render_line(spec, atlas()), Error);
  spec = plain_spec(std::string(50, 'W'));
  RenderOptions tight;
  tight.max_typeset_width = 100;
  CHECK_THROWS_AS(render_line(spec, atlas(), tight), TextTooLong);
  CHECK_THROWS_AS(render_line(plain_spec("caf\xC3\xA9"), atlas()), MissingGlyph);
}

TEST_CASE("spec json round trip and digest") {
  auto spec = plain_spec("tab\there");
  spec.params.noise = {NoiseKind::erode, 2};
  spec.params.margins = {1, 2, 3, 4};
  spec.seed = 0xFFFFFFFFFFFFFFFFull;
  CHECK(spec_from_json(to_json(spec)) == spec);
  CHECK(spec_digest(spec) == spec_digest(spec_from_json(to_json(spec))));
  auto other = spec;
  other.seed = 1;
  CHECK(spec_digest(other) != spec_digest(spec));
}

TEST_CASE("counter rng") {
  CounterRng a(derive_key(1, 2, 3)), b(derive_key(1, 2, 3)), c(derive_key(1, 2, 4));
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != c.next_u64());
  CounterRng r(7);
  double sum = 0;
  for (int k = 0; k < 10000; ++k) {
    const double u = r.uniform(-2, 3);
    CHECK(u >= -2);
    CHECK(u < 3);
    sum += u;
    const int n = r.uniform_int(1, 6);
    CHECK(n >= 1);
    CHECK(n <= 6);
  }
  CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("sample_specs") {
  const std::vector<std::string> lines{"alpha", "beta", "gamma"};
  CHECK(sample_specs(lines, 0, 1).empty());
  CHECK_THROWS_AS(sample_specs({}, 3, 1), EmptyCorpus);
  const auto a = sample_specs(lines, 10000, 99, {}, "font");
  CHECK(a == sample_specs(lines, 10000, 99, {}, "font"));
  double mean = 0;
  for (const auto& s : a) {
    CHECK(s.params.skew_deg >= -10);
    CHECK(s.params.skew_deg <= 10);
    CHECK(s.glyph_source == "font");
    CHECK(std::find(lines.begin(), lines.end(), s.text) != lines.end());
    mean += s.params.skew_deg;
  }
  mean /= static_cast<double>(a.size());
  CHECK(std::abs(mean) <= 0.5);
  // A prefix of a longer request is the shorter request.
  const auto first = sample_specs(lines, 10, 99, {}, "font");
  CHECK(std::equal(first.begin(), first.end(), a.begin()));
}

TEST_CASE("png round trip") {
  GrayImage img(7, 3, 0.0f);
  for (std::size_t k = 0; k < img.pixels().size(); ++k) img.pixels()[k] = static_cast<float>(k) / 20.0f;
  const auto path = fs::temp_directory_path() / "ocreval_png_roundtrip.png";
  write_png(img, path);
  const auto back = read_png(path);
  REQUIRE(back.width() == 7);
  REQUIRE(back.height() == 3);
  for (std::size_t k = 0; k < img.pixels().size(); ++k) {
    CHECK(to_byte(back.pixels()[k]) == to_byte(img.pixels()[k]));
  }
  fs::remove(path);
}

TEST_CASE("generate_dataset skips failing specs and is reproducible") {
  const auto dir = fs::temp_directory_path() / "ocreval_dataset";
  fs::remove_all(dir);
  auto specs = sample_specs({"first line", "second", "third one", "4th", "fifth!"}, 5, 3, {}, atlas().id());
  specs[2].text = "na\xC3\xAFve";  // no glyph for the diaeresis i
  DatasetOptions serial;
  serial.jobs = 1;
  const auto m = generate_dataset(specs, atlas(), dir / "a", serial);
  CHECK(m.entries.size() == 4);
  REQUIRE(m.failures.size() == 1);
  CHECK(m.failures[0].spec_index == 2);
  CHECK(fs::exists(dir / "a" / m.entries[0].image_path));
  CHECK(m.entries[2].text == specs[3].text);

  DatasetOptions parallel;
  parallel.jobs = 3;
  const auto again = generate_dataset(specs, atlas(), dir / "b", parallel);
  CHECK(again == m);
  CHECK(slurp(dir / "a" / "manifest.tsv") == slurp(dir / "b" / "manifest.tsv"));
  for (const auto& e : m.entries) CHECK(slurp(dir / "a" / e.image_path) == slurp(dir / "b" / e.image_path));

  const auto five = generate_dataset(std::vector<SynthSpec>(specs.begin(), specs.begin() + 2), atlas(), dir / "c");
  CHECK(five.entries.size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("escape_tsv") {
  CHECK(escape_tsv("a\tb\\c\nd") == "a\\tb\\\\c\\nd");
}
