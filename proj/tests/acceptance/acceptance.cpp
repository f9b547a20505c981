// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "ocreval/bench/evaluate.hpp"
#include "ocreval/bench/report.hpp"
#include "ocreval/ingest/page_io.hpp"
#include "ocreval/ingest/unicode.hpp"
#include "ocreval/metrics/alignment.hpp"
#include "ocreval/metrics/crr.hpp"
#include "ocreval/metrics/fca.hpp"
#include "ocreval/order/reading_order.hpp"
#include "ocreval/stats/corpus_stats.hpp"
#include "ocreval/synth/glyph_atlas.hpp"
#include "ocreval/synth/render.hpp"
#include "ocreval/synth/sampler.hpp"
#include "oracles.hpp"
#include "pages.hpp"

using namespace ocreval;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const ingest::NormalizationPolicy kPolicy = [] {
  ingest::NormalizationPolicy p;
  p.charset = ingest::builtin_charset("english95_space");
  return p;
}();

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, double limit_seconds, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_seconds > 0 && seconds >= limit_seconds) {
    o.pass = false;
    o.detail += "; exceeded " + std::to_string(limit_seconds) + " s";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", seconds);
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << buf << "): " << o.detail << std::endl;
  failures += o.pass ? 0 : 1;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

/// Substitutes, deletes or inserts a letter at roughly `rate` of positions.
std::string corrupt(const std::string& s, double rate, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::string out;
  for (char c : s) {
    const double r = u(rng);
    if (r < rate / 3) {
      out += static_cast<char>(letter(rng));
    } else if (r < 2 * rate / 3) {
      continue;
    } else if (r < rate) {
      out += c;
      out += static_cast<char>(letter(rng));
    } else {
      out += c;
    }
  }
  return out;
}

/// Shuffles both the vector order and the order_index of the lines.
PageAnnotation shuffled(PageAnnotation page, std::mt19937_64& rng) {
  std::shuffle(page.lines.begin(), page.lines.end(), rng);
  for (std::size_t k = 0; k < page.lines.size(); ++k) page.lines[k].order_index = static_cast<std::uint32_t>(k);
  return page;
}

bool is_identity_order(const PageAnnotation& a, const PageAnnotation& b) {
  const auto la = lines_in_reading_order(a), lb = lines_in_reading_order(b);
  for (std::size_t k = 0; k < la.size(); ++k) {
    if (la[k].id != lb[k].id) return false;
  }
  return true;
}

Outcome crr_suite() {
  std::mt19937_64 rng(20240601);
  const std::vector<std::u32string> alphabets{U"ab", U"abc", U"abcd", U"xyz é"};
  std::size_t pairs = 0, count_mismatch = 0, formula_mismatch = 0;
  for (std::size_t k = 0; k < 240; ++k) {
    const auto& alphabet = alphabets[k % alphabets.size()];
    const auto a = oracle::random_string(rng, 12, alphabet);
    const auto b = oracle::random_string(rng, 12, alphabet);
    const auto got = metrics::align(a, b);
    const auto want = oracle::brute_force_align(a, b);
    ++pairs;
    if (oracle::Counts{got.substitutions, got.deletions, got.insertions, got.correct} != want) ++count_mismatch;
    if (std::abs(metrics::crr(got).value - oracle::crr_formula(want)) > 1e-12) ++formula_mismatch;
  }
  const double empty_empty = metrics::crr(metrics::align(U"", U"")).value;
  const double empty_gt = metrics::crr(metrics::align(U"", U"abc")).value;
  const double a_aaaa = metrics::crr(metrics::align(U"a", U"aaaa")).value;
  const bool degenerate = empty_empty == 1.0 && empty_gt == 0.0 && std::abs(a_aaaa + 2.0) <= 1e-12;
  return {count_mismatch == 0 && formula_mismatch == 0 && degenerate,
          std::to_string(pairs) + " pairs, " + std::to_string(count_mismatch) + " count mismatches, " +
              std::to_string(formula_mismatch) + " formula mismatches; degenerate " + fmt(empty_empty) + "/" +
              fmt(empty_gt) + "/" + fmt(a_aaaa)};
}

Outcome fca_order_invariance() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> n_lines(5, 40);
  std::size_t unstable = 0, nontrivial = 0, crr_changed = 0;
  for (int p = 0; p < 100; ++p) {
    const auto lines = fixture::random_lines(rng, n_lines(rng), 15, 70);
    const auto gt = fixture::stacked_page("g" + std::to_string(p), lines);
    std::vector<std::string> noisy;
    for (const auto& l : lines) noisy.push_back(corrupt(l, 0.08, rng));
    const auto pred = fixture::text_page(gt.page_id, noisy);
    const double base_fca = metrics::fca(gt, pred, kPolicy).value.value;
    const double base_crr = metrics::page_crr(gt, pred, kPolicy).value;
    for (int s = 0; s < 10; ++s) {
      const auto perm = shuffled(pred, rng);
      if (std::bit_cast<std::uint64_t>(metrics::fca(gt, perm, kPolicy).value.value) !=
          std::bit_cast<std::uint64_t>(base_fca)) {
        ++unstable;
      }
      if (is_identity_order(pred, perm)) continue;
      ++nontrivial;
      if (metrics::page_crr(gt, perm, kPolicy).value != base_crr) ++crr_changed;
    }
  }
  const double share = nontrivial ? static_cast<double>(crr_changed) / static_cast<double>(nontrivial) : 0.0;
  return {unstable == 0 && share >= 0.95,
          "1000 permutations, " + std::to_string(unstable) + " FCA changes; CRR differs on " +
              std::to_string(crr_changed) + "/" + std::to_string(nontrivial) + " nontrivial shuffles (" +
              fmt(share) + ")"};
}

Outcome reference_restoration() {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<std::size_t> n_lines(5, 40);
  std::size_t restored = 0, improved = 0;
  for (int p = 0; p < 50; ++p) {
    const auto lines = fixture::random_lines(rng, n_lines(rng), 15, 70);
    const auto gt = fixture::stacked_page("g", lines);
    const auto exact = shuffled(fixture::text_page("g", lines), rng);
    const auto fixed = order::order_by_reference(gt, exact, 0.9, kPolicy).page;
    if (metrics::page_crr(gt, fixed, kPolicy).value == 1.0) ++restored;

    // Corrupt 10% of the lines (at least one) well below the threshold.
    std::vector<std::string> damaged = lines;
    std::vector<std::size_t> idx(lines.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t n_bad = std::max<std::size_t>(1, lines.size() / 10);
    for (std::size_t k = 0; k < n_bad; ++k) {
      auto& l = damaged[idx[k]];
      do {
        l = corrupt(lines[idx[k]], 0.5, rng);
      } while (1.0 - static_cast<double>(oracle::wagner_fischer(ingest::to_u32(l), ingest::to_u32(lines[idx[k]]))) /
                         static_cast<double>(std::max(l.size(), lines[idx[k]].size())) >= 0.9);
    }
    const auto pred = shuffled(fixture::text_page("g", damaged), rng);
    const double as_is = metrics::page_crr(gt, pred, kPolicy).value;
    const double ref = metrics::page_crr(gt, order::order_by_reference(gt, pred, 0.9, kPolicy).page, kPolicy).value;
    if (ref > as_is) ++improved;
  }
  return {restored == 50 && improved >= 45,
          "exact permutations restored to CRR 1.0 on " + std::to_string(restored) +
              "/50 pages; with 10% corrupted lines CRR improved on " + std::to_string(improved) + "/50 pages"};
}

Outcome fca_split_merge() {
  const double split = metrics::fca(fixture::text_page("g", {"hello world"}), fixture::text_page("p", {"hello", "world"}),
                                    kPolicy).value.value;
  const double merged = metrics::fca(fixture::text_page("g", {"hello", "world"}),
                                     fixture::text_page("p", {"hello world"}), kPolicy).value.value;
  return {split == 1.0 && merged == 1.0, "split " + fmt(split) + ", merged " + fmt(merged)};
}

/// Orientation of the ink in degrees, counter-clockwise positive.
double principal_angle(const synth::GrayImage& img, float fill) {
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
  return -0.5 * std::atan2(2 * sxy, sxx - syy) * 180.0 / std::acos(-1.0);
}

Outcome synth_determinism() {
  const auto glyphs = synth::load_atlas(OCREVAL_FIXTURES "/atlas");
  std::mt19937_64 rng(5);
  std::vector<std::string> corpus;
  std::uniform_int_distribution<std::size_t> len(5, 40);
  for (int k = 0; k < 200; ++k) {
    auto l = oracle::random_line(rng, len(rng));
    l[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(l[0])));
    corpus.push_back(l + (k % 3 ? "." : ", 42!"));
  }
  const auto specs = synth::sample_specs(corpus, 1000, 2024, {}, glyphs.id());
  const auto again = synth::sample_specs(corpus, 1000, 2024, {}, glyphs.id());
  std::size_t mismatched = 0, wrong_size = 0, errors = 0;
  double changed = 0, expected = 0;
  std::size_t sp_specs = 0;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    try {
      synth::RenderTrace trace;
      const auto a = synth::render_line(specs[k], glyphs, {}, &trace);
      const auto b = synth::render_line(again[k], glyphs);
      if (!(a == b)) ++mismatched;
      if (a.width() != 400 || a.height() != 32) ++wrong_size;
      if (specs[k].params.noise.kind == synth::NoiseKind::salt_pepper) {
        ++sp_specs;
        const auto& before = trace.before_noise.pixels();
        const auto& after = trace.after_noise.pixels();
        double exposure = 0;
        for (std::size_t i = 0; i < before.size(); ++i) {
          changed += before[i] != after[i];
          // A pixel already at 0 or 1 keeps its value for half of the draws.
          exposure += (before[i] == 0.0f || before[i] == 1.0f) ? 0.5 : 1.0;
        }
        expected += specs[k].params.noise.amount * exposure;
      }
    } catch (const Error&) {
      ++errors;
    }
  }
  synth::SynthSpec skew;
  skew.text = "The quick brown fox jumps over the lazy dog";
  skew.glyph_source = glyphs.id();
  skew.params.skew_deg = 10.0;
  const double measured = principal_angle(synth::render_line(skew, glyphs), 1.0f);
  const double ratio = expected > 0 ? changed / expected : 0.0;
  const bool ok = specs == again && mismatched == 0 && wrong_size == 0 && errors == 0 &&
                  std::abs(measured - 10.0) <= 0.5 && sp_specs > 0 && std::abs(ratio - 1.0) <= 0.2;
  return {ok, "1000 specs: " + std::to_string(mismatched) + " mismatches, " + std::to_string(wrong_size) +
                  " not 32x400, " + std::to_string(errors) + " errors; skew 10 deg measured " + fmt(measured) +
                  "; salt-pepper observed/expected flips " + fmt(ratio) + " over " + std::to_string(sp_specs) +
                  " specs"};
}

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome closed_loop() {
  const fs::path dir = fs::temp_directory_path() / "ocreval_acceptance_loop";
  fs::remove_all(dir);
  fs::create_directories(dir / "gt");
  fs::create_directories(dir / "images");
  std::mt19937_64 rng(99);
  for (int p = 0; p < 12; ++p) {
    auto page = fixture::stacked_page("page" + std::to_string(p), fixture::random_lines(rng, 8, 20, 60));
    page.image_ref = page.page_id + ".img";
    std::ofstream img(dir / "images" / *page.image_ref);
    for (const auto& l : page.lines) img << l.text << '\n';
    ingest::save_page(page, dir / "gt" / (page.page_id + ".json"));
  }
  {
    std::ofstream cfg(dir / "engines.json");
    cfg << R"([{"name": "copy", "command": "cp {input_image} {output_file}", "detector": "gt-lines"},
               {"name": "shuffle", "command": "tac {input_image} > {output_file}", "detector": "gt-lines"}])";
  }
  const std::string cmd = std::string(OCREVAL_CLI) + " eval --gt " + (dir / "gt").string() + " --engines " +
                          (dir / "engines.json").string() + " --images " + (dir / "images").string() +
                          " --work-dir " + (dir / "work").string() + " --order as_is --order ref --format json --out " +
                          (dir / "report.json").string();
  const int code = run_command(cmd);
  if (code != 0) return {false, "cli exited with " + std::to_string(code)};
  std::ifstream in(dir / "report.json");
  const auto report = bench::report_from_json(nlohmann::json::parse(in));
  const bench::CorpusRow* rows[2][2] = {};
  for (const auto& r : report.corpus) rows[r.engine == "shuffle"][r.strategy == "ref"] = &r;
  for (auto& pair : rows) {
    for (auto* r : pair) {
      if (!r) return {false, "report is missing a corpus row"};
    }
  }
  const bool copy_ok = rows[0][0]->crr == 1.0 && rows[0][0]->fca == 1.0;
  const bool shuffle_ok = rows[1][0]->fca == 1.0 && rows[1][0]->crr < 1.0 && rows[1][1]->crr == 1.0 &&
                          rows[1][1]->fca == 1.0;
  fs::remove_all(dir);
  return {copy_ok && shuffle_ok, "copy CRR " + fmt(rows[0][0]->crr) + " FCA " + fmt(rows[0][0]->fca) +
                                     "; shuffle as_is CRR " + fmt(rows[1][0]->crr) + " FCA " + fmt(rows[1][0]->fca) +
                                     ", ref CRR " + fmt(rows[1][1]->crr)};
}

Outcome throughput() {
  std::mt19937_64 rng(251);
  Corpus gt, pred;
  for (int p = 0; p < 251; ++p) {
    const auto lines = fixture::random_lines(rng, 40, 55, 65);
    gt.pages.push_back(fixture::stacked_page("page" + std::to_string(p), lines));
    std::vector<std::string> noisy;
    for (const auto& l : lines) noisy.push_back(corrupt(l, 0.05, rng));
    pred.pages.push_back(fixture::text_page(gt.pages.back().page_id, noisy));
  }
  bench::EngineOutput out;
  out.engine = "synthetic";
  out.predictions = pred;
  bench::EvalConfig config;
  config.policy = kPolicy;
  config.jobs = 1;
  const auto start = Clock::now();
  const auto serial = bench::evaluate(gt, {out}, config);
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  config.jobs = 4;
  const auto parallel = bench::evaluate(gt, {out}, config);
  const bool same = bench::render_report(serial, bench::ReportFormat::json) ==
                    bench::render_report(parallel, bench::ReportFormat::json);
  return {seconds < 10.0 && same, "251x40 lines single-threaded in " + fmt(seconds) + " s (CRR " +
                                      fmt(serial.corpus[0].crr) + ", FCA " + fmt(serial.corpus[0].fca) +
                                      "); parallel report " + (same ? "identical" : "differs")};
}

Outcome statistics() {
  using Bins = std::vector<std::pair<std::string, std::size_t>>;
  const auto corpus = ingest::load_corpus(OCREVAL_FIXTURES "/stats/three_lines.txt", PageKind::prediction);
  // Lines "We will watch", "a  b", "AaB" -> "we will watch", "a b", "aab".
  const Bins chars{{"a", 4}, {" ", 3}, {"w", 3}, {"b", 2}, {"l", 2},
                   {"c", 1}, {"e", 1}, {"h", 1}, {"i", 1}, {"t", 1}};
  const Bins words{{"1", 1}, {"2", 1}, {"3", 1}};
  const auto c = stats::char_frequency(corpus, kPolicy);
  const auto w = stats::words_per_line(corpus, kPolicy);
  const bool ok = c.bins == chars && c.total == 19 && w.bins == words && w.total == 3;
  return {ok, std::to_string(c.bins.size()) + " character bins (total " + std::to_string(c.total) + "), " +
                  std::to_string(w.bins.size()) + " word-count bins"};
}

}  // namespace

int main() {
  report("crr-formula-suite", 10, crr_suite);
  report("fca-order-invariance", 30, fca_order_invariance);
  report("reference-reordering-restoration", 20, reference_restoration);
  report("fca-split-merge-tolerance", 0, fca_split_merge);
  report("synthgen-determinism-and-bounds", 60, synth_determinism);
  report("closed-loop-cli-harness", 30, closed_loop);
  report("evaluation-throughput", 0, throughput);
  report("corpus-statistics-fixture", 0, statistics);
  std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
