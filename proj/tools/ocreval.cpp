// ocreval command line: eval, run, synth, stats, validate.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ocreval/bench/engine.hpp"
#include "ocreval/bench/evaluate.hpp"
#include "ocreval/bench/report.hpp"
#include "ocreval/ingest/charset.hpp"
#include "ocreval/ingest/page_io.hpp"
#include "ocreval/stats/corpus_stats.hpp"
#include "ocreval/synth/dataset.hpp"
#include "ocreval/synth/glyph_atlas.hpp"
#include "ocreval/synth/sampler.hpp"

namespace fs = std::filesystem;
using namespace ocreval;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kInvalid = 2, kPartial = 3 };

ingest::NormalizationPolicy make_policy(const std::string& charset) {
  ingest::NormalizationPolicy policy;
  policy.charset = ingest::resolve_charset(charset);
  return policy;
}

std::vector<fs::path> page_files(const fs::path& path) {
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".json" || ext == ".txt")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

fs::path timings_file(const fs::path& pred_dir) {
  auto p = pred_dir;
  if (!p.has_filename()) p = p.parent_path();
  return p.parent_path() / (p.filename().string() + ".timings.json");
}

json timings_to_json(const bench::EngineOutput& out) {
  json timings = json::array();
  for (const auto& t : out.timings) {
    json stages = json::array();
    for (const auto& s : t.stages) stages.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
    timings.push_back({{"page_id", t.page_id}, {"stages", stages}, {"excluded_stages", t.excluded_stages}});
  }
  return json{{"engine", out.engine}, {"detector", out.detector}, {"timings", timings},
              {"failed_pages", out.failed_pages}};
}

void timings_from_json(const json& j, bench::EngineOutput& out) {
  out.detector = j.value("detector", std::string());
  for (const auto& t : j.at("timings")) {
    bench::TimingRecord r;
    r.page_id = t.at("page_id").get<std::string>();
    for (const auto& s : t.at("stages")) r.stages.push_back({s.at("stage").get<std::string>(), s.at("seconds").get<double>()});
    r.excluded_stages = t.at("excluded_stages").get<std::vector<std::string>>();
    out.timings.push_back(std::move(r));
  }
  out.failed_pages = j.value("failed_pages", std::vector<std::string>{});
}

/// Predictions from a directory; `<dir>.timings.json`, written by `run`,
/// supplies timings and failure flags when present.
bench::EngineOutput load_predictions(const fs::path& dir) {
  bench::EngineOutput out;
  out.predictions = ingest::load_corpus(dir, PageKind::prediction);
  auto name = fs::path(dir);
  if (!name.has_filename()) name = name.parent_path();
  out.engine = name.filename().string();
  const fs::path tf = timings_file(dir);
  if (fs::exists(tf)) {
    std::ifstream in(tf);
    try {
      const json j = json::parse(in);
      timings_from_json(j, out);
      out.engine = j.value("engine", out.engine);
    } catch (const json::exception& e) {
      throw ParseError(tf.string() + ": " + e.what());
    }
  }
  return out;
}

struct EngineFlags {
  std::string engines;
  std::string images;
  std::string work_dir;
  unsigned jobs = 0;
};

std::vector<bench::EngineOutput> run_engines(const EngineFlags& flags, const Corpus& gt,
                                             std::size_t& failures) {
  std::vector<bench::EngineOutput> outputs;
  const auto adapters = bench::load_engine_config(flags.engines);
  bench::RunOptions options;
  options.image_root = flags.images;
  options.work_dir = flags.work_dir;
  options.jobs = flags.jobs;
  for (const auto& adapter : adapters) {
    auto run = bench::run_engine(adapter, gt, options);
    for (const auto& f : run.failures) {
      std::cerr << "engine " << adapter.name << ": page " << f.page_id << ": " << f.reason << '\n';
    }
    failures += run.failures.size();
    outputs.push_back(bench::engine_output(adapter, std::move(run)));
  }
  return outputs;
}

int cmd_validate(const std::string& path, const std::string& kind_name) {
  const PageKind kind = kind_name == "gt" ? PageKind::ground_truth : PageKind::prediction;
  std::size_t pages = 0, problems = 0;
  for (const auto& file : page_files(path)) {
    try {
      const auto page = ingest::read_page_file(file);
      ++pages;
      for (const auto& v : validate_page(page, kind)) {
        std::cout << file.string() << ": " << describe(v) << '\n';
        ++problems;
      }
    } catch (const ParseError& e) {
      std::cout << e.what() << '\n';
      ++problems;
    }
  }
  std::cout << pages << " page(s), " << problems << " problem(s)\n";
  return problems ? kInvalid : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OCR pipeline evaluation toolkit"};
  app.require_subcommand(1);

  std::string charset = "english95_space";
  unsigned jobs = 0;

  // validate
  auto* validate = app.add_subcommand("validate", "check page files for structural problems");
  std::string validate_path, validate_kind = "gt";
  validate->add_option("path", validate_path, "page file or directory")->required();
  validate->add_option("--kind", validate_kind, "gt (polygons required) or pred")
      ->check(CLI::IsMember({"gt", "pred"}));

  // eval
  auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
  std::string gt_dir, ref_dir, ref_label, format = "markdown", out = "-";
  std::vector<std::string> pred_dirs, orders{"as_is"};
  double tau = 0.9;
  EngineFlags eval_engines;
  eval->add_option("--gt", gt_dir, "ground-truth page directory")->required();
  eval->add_option("--pred", pred_dirs, "prediction directory, one per engine (repeatable)");
  eval->add_option("--engines", eval_engines.engines, "engine config; runs the engines first");
  eval->add_option("--images", eval_engines.images, "base directory for image_ref");
  eval->add_option("--work-dir", eval_engines.work_dir, "engine output directory")->default_val("ocreval-work");
  eval->add_option("--order", orders, "as_is | blind | ref (repeatable)")
      ->check(CLI::IsMember({"as_is", "blind", "ref"}));
  eval->add_option("--tau", tau, "acceptance threshold for --order ref")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--ref-dir", ref_dir, "reference pages for --order ref (default: ground truth)");
  eval->add_option("--ref-label", ref_label, "label of the reference source in tables");
  eval->add_option("--charset", charset, "none, english95, english95_space, or a charset JSON file");
  eval->add_option("--format", format)->check(CLI::IsMember({"csv", "markdown", "md", "json"}));
  eval->add_option("--out", out, "report file, - for stdout");
  eval->add_option("--jobs", jobs, "worker threads, 0 = all CPUs");

  // run
  auto* run = app.add_subcommand("run", "run engines and store their predictions");
  std::string run_gt, run_out;
  EngineFlags run_engines_flags;
  run->add_option("--engines", run_engines_flags.engines, "engine config (JSON)")->required();
  run->add_option("--pages", run_gt, "page directory listing page ids and image_ref")->required();
  run->add_option("--images", run_engines_flags.images, "base directory for image_ref");
  run->add_option("--out", run_out, "output directory")->required();
  run->add_option("--jobs", jobs, "concurrent engine invocations, 0 = all CPUs");

  // synth
  auto* synth = app.add_subcommand("synth", "render distorted synthetic text lines");
  std::string lines_file, atlas_dir, synth_out;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  synth->add_option("--lines", lines_file, "UTF-8 text file, one line of text per line")->required();
  synth->add_option("--atlas", atlas_dir, "glyph atlas directory (atlas.json + atlas.png)")->required();
  synth->add_option("--count,-n", count, "number of images");
  synth->add_option("--seed", seed);
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--jobs", jobs, "worker threads, 0 = all CPUs");

  // stats
  auto* stats = app.add_subcommand("stats", "corpus histograms");
  std::string stats_path, hist = "chars", stats_format = "csv";
  stats->add_option("path", stats_path, "page file or directory")->required();
  stats->add_option("--hist", hist)->check(CLI::IsMember({"chars", "words"}));
  stats->add_option("--format", stats_format)->check(CLI::IsMember({"csv", "bars"}));
  stats->add_option("--charset", charset, "none, english95, english95_space, or a charset JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_path, validate_kind);

    if (*eval) {
      if (pred_dirs.empty() == eval_engines.engines.empty()) {
        std::cerr << "eval: give either --pred or --engines\n";
        return kUsage;
      }
      bench::EvalConfig config;
      config.policy = make_policy(charset);
      config.jobs = jobs;
      config.strategies.clear();
      for (const auto& o : orders) {
        order::OrderingStrategy s;
        s.kind = order::parse_ordering_kind(o);
        s.tau = tau;
        if (std::find(config.strategies.begin(), config.strategies.end(), s) == config.strategies.end()) {
          config.strategies.push_back(s);
        }
      }
      if (!ref_label.empty()) {
        config.reference_label = ref_label;
      } else if (!ref_dir.empty()) {
        config.reference_label = "R.O";
      }
      const auto report_format = bench::parse_report_format(format);
      const Corpus gt = ingest::load_corpus(gt_dir, PageKind::ground_truth);
      Corpus reference;
      if (!ref_dir.empty()) reference = ingest::load_corpus(ref_dir, PageKind::prediction);

      std::size_t failures = 0;
      std::vector<bench::EngineOutput> outputs;
      if (!eval_engines.engines.empty()) {
        eval_engines.jobs = jobs;
        outputs = run_engines(eval_engines, gt, failures);
      } else {
        for (const auto& dir : pred_dirs) outputs.push_back(load_predictions(dir));
        for (const auto& o : outputs) failures += o.failed_pages.size();
      }
      const auto report = bench::evaluate(gt, outputs, config, ref_dir.empty() ? nullptr : &reference);
      bench::emit_report(report, report_format, out);
      return failures ? kPartial : kOk;
    }

    if (*run) {
      const Corpus pages = ingest::load_corpus(run_gt, PageKind::prediction);
      run_engines_flags.work_dir = (fs::path(run_out) / ".work").string();
      run_engines_flags.jobs = jobs;
      std::size_t failures = 0;
      const auto outputs = run_engines(run_engines_flags, pages, failures);
      for (const auto& o : outputs) {
        const fs::path dir = fs::path(run_out) / o.engine;
        ingest::save_corpus(o.predictions, dir);
        std::ofstream tf(timings_file(dir));
        tf << timings_to_json(o).dump(2) << '\n';
        if (!tf) throw IoError("cannot write " + timings_file(dir).string());
      }
      return failures ? kPartial : kOk;
    }

    if (*synth) {
      std::ifstream in(lines_file);
      if (!in) throw IoError("cannot open " + lines_file);
      std::vector<std::string> lines;
      for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
      }
      const auto glyphs = synth::load_atlas(atlas_dir);
      const auto specs = synth::sample_specs(lines, count, seed, {}, glyphs.id());
      synth::DatasetOptions options;
      options.jobs = jobs;
      const auto manifest = synth::generate_dataset(specs, glyphs, synth_out, options);
      std::cerr << manifest.entries.size() << " image(s), " << manifest.failures.size() << " failure(s)\n";
      return manifest.failures.empty() ? kOk : kPartial;
    }

    if (*stats) {
      const Corpus corpus = ingest::load_corpus(stats_path, PageKind::prediction);
      const auto policy = make_policy(charset);
      const auto h = hist == "chars" ? stats::char_frequency(corpus, policy) : stats::words_per_line(corpus, policy);
      if (stats_format == "csv") {
        stats::write_csv(h, std::cout);
      } else {
        stats::write_bars(h, std::cout);
      }
      return kOk;
    }
  } catch (const ingest::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& v : e.violations()) std::cerr << "  " << describe(v) << '\n';
    return kInvalid;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const MissingGeometry& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const bench::UnknownPage& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
