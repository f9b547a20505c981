#include <doctest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "ocreval/bench/engine.hpp"
#include "ocreval/bench/evaluate.hpp"
#include "ocreval/bench/report.hpp"
#include "ocreval/bench/subprocess.hpp"
#include "ocreval/ingest/page_io.hpp"
#include "ocreval/metrics/aggregate.hpp"
#include "pages.hpp"

using namespace ocreval;
using namespace ocreval::bench;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("ocreval_bench_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

/// Ground truth whose image_ref files hold the page text, so `cp` acts as
/// a perfect engine.
Corpus text_image_corpus(const fs::path& dir, const std::vector<std::vector<std::string>>& pages) {
  Corpus c;
  for (std::size_t k = 0; k < pages.size(); ++k) {
    auto page = fixture::stacked_page("page" + std::to_string(k), pages[k]);
    page.image_ref = page.page_id + ".img";
    std::ofstream out(dir / *page.image_ref);
    for (const auto& l : pages[k]) out << l << '\n';
    c.pages.push_back(page);
  }
  return c;
}

EngineAdapter copy_engine() {
  EngineAdapter a;
  a.name = "copy";
  a.command_template = "cp {input_image} {output_file}";
  a.detector = "none";
  return a;
}

EngineOutput offline(const std::string& name, Corpus predictions) {
  EngineOutput o;
  o.engine = name;
  o.predictions = std::move(predictions);
  return o;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(OCREVAL_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("adapter templates are checked before running") {
  auto a = copy_engine();
  CHECK_NOTHROW(a.validate());
  a.command_template = "cp {input_image} out.txt";
  CHECK_THROWS_AS(a.validate(), AdapterConfigError);
  a.command_template = "cp {input_image} {input_image} {output_file}";
  CHECK_THROWS_AS(a.validate(), AdapterConfigError);
  a.command_template = "touch /nonexistent/should-not-run {input_image}";
  Corpus pages{"c", {fixture::stacked_page("p", {"x"})}};
  CHECK_THROWS_AS(run_engine(a, pages, {}), AdapterConfigError);
}

TEST_CASE("engine config files") {
  TempDir dir("config");
  {
    std::ofstream out(dir.path / "engines.json");
    out << R"({"engines": [{"name": "a", "command": "cp {input_image} {output_file}", "timeout": 5,
               "stage": "recognition_only", "detector": "lines",
               "detection_command": "true {input_image} {output_file}"}]})";
  }
  const auto engines = load_engine_config(dir.path / "engines.json");
  REQUIRE(engines.size() == 1);
  CHECK(engines[0].stage == StageLabel::recognition_only);
  CHECK(engines[0].timeout_seconds == 5);
  CHECK(adapter_from_json(to_json(engines[0])).command_template == engines[0].command_template);
  {
    std::ofstream out(dir.path / "bad.json");
    out << R"([{"name": "a", "command": "cp {input_image} x"}])";
  }
  CHECK_THROWS_AS(load_engine_config(dir.path / "bad.json"), AdapterConfigError);
}

TEST_CASE("subprocess timeout kills the process group") {
  const auto r = run_shell("sleep 5", std::chrono::duration<double>(0.2), {});
  CHECK(r.timed_out);
  CHECK(r.wall_seconds < 2.0);
  const auto ok = run_shell("exit 3", std::chrono::duration<double>(5), {});
  CHECK_FALSE(ok.timed_out);
  CHECK(ok.exit_code == 3);
  CHECK(shell_quote("it's") == "'it'\\''s'");
}

TEST_CASE("copy engine closes the loop") {
  TempDir dir("copy");
  const auto gt = text_image_corpus(dir.path, {{"first line", "second line"}, {"only line"}});
  RunOptions options;
  options.image_root = dir.path;
  options.work_dir = dir.path / "work";
  options.jobs = 2;
  const auto run = run_engine(copy_engine(), gt, options);
  CHECK(run.failures.empty());
  REQUIRE(run.predictions.pages.size() == 2);
  CHECK(run.predictions.pages[0].lines[1].text == "second line");
  REQUIRE(run.timings.size() == 2);
  CHECK(run.timings[0].reported_seconds() >= 0.0);

  const auto report = evaluate(gt, {engine_output(copy_engine(), run)}, EvalConfig{});
  REQUIRE(report.corpus.size() == 1);
  CHECK(report.corpus[0].crr == 1.0);
  CHECK(report.corpus[0].fca == 1.0);
  CHECK(report.corpus[0].mean_seconds.has_value());
}

TEST_CASE("a slow page fails alone") {
  TempDir dir("slow");
  const auto gt = text_image_corpus(dir.path, {{"a b c"}, {"d e f"}, {"g h i"}});
  auto slow = copy_engine();
  slow.command_template =
      "sh -c 'case \"$0\" in *page1*) sleep 5;; esac; cp \"$0\" \"$1\"' {input_image} {output_file}";
  slow.timeout_seconds = 0.5;
  RunOptions options;
  options.image_root = dir.path;
  options.work_dir = dir.path / "work";
  options.jobs = 1;
  const auto run = run_engine(slow, gt, options);
  REQUIRE(run.failures.size() == 1);
  CHECK(run.failures[0].page_id == "page1");
  REQUIRE(run.predictions.pages.size() == 3);
  CHECK(run.predictions.pages[1].lines.empty());
  CHECK(run.predictions.pages[0].lines.size() == 1);
  CHECK(run.predictions.pages[2].lines.size() == 1);

  const auto report = evaluate(gt, {engine_output(slow, run)}, EvalConfig{});
  CHECK(report.pages.size() == 3);
  CHECK(report.pages[1].failed);
  CHECK(report.pages[1].crr == 0.0);
  CHECK(report.corpus[0].failed_pages == 1);
}

TEST_CASE("detection time is excluded for recognition-only adapters") {
  TempDir dir("stages");
  const auto gt = text_image_corpus(dir.path, {{"x"}});
  auto a = copy_engine();
  a.stage = StageLabel::recognition_only;
  a.detection_template = "sleep 0.3; cp {input_image} {output_file}";
  a.command_template = "cp {detection_file} {output_file} # {input_image}";
  RunOptions options;
  options.image_root = dir.path;
  options.work_dir = dir.path / "work";
  const auto run = run_engine(a, gt, options);
  REQUIRE(run.failures.empty());
  const auto& t = run.timings[0];
  REQUIRE(t.stages.size() == 2);
  CHECK(t.stages[0].stage == "detection");
  CHECK(t.stages[0].seconds >= 0.3);
  CHECK(t.reported_seconds() == t.stages[1].seconds);
  CHECK(run.predictions.pages[0].lines[0].text == "x");
}

TEST_CASE("engine output parsing") {
  TempDir dir("parse");
  {
    std::ofstream out(dir.path / "a.out");
    out << R"({"lines": [{"id": "k", "text": "json text", "order_index": 0}]})";
  }
  const auto page = parse_engine_output(dir.path / "a.out", "pg");
  CHECK(page.page_id == "pg");
  CHECK(page.lines[0].text == "json text");
  CHECK_THROWS_AS(parse_engine_output(dir.path / "missing.out", "pg"), IoError);
}

TEST_CASE("evaluate: identical predictions") {
  Corpus gt{"gt", {fixture::stacked_page("a", {"one two", "three"}), fixture::stacked_page("b", {"four"})}};
  const auto report = evaluate(gt, {offline("e", gt)}, EvalConfig{});
  CHECK(report.corpus[0].crr == 1.0);
  CHECK(report.corpus[0].fca == 1.0);
  CHECK_FALSE(report.corpus[0].mean_seconds.has_value());
}

TEST_CASE("evaluate: shuffles under as_is and reference-guided ordering") {
  const std::vector<std::string> lines{"alpha beta", "gamma delta", "epsilon zeta", "eta theta"};
  Corpus gt{"gt", {fixture::stacked_page("a", lines), fixture::stacked_page("b", lines)}};
  Corpus pred{"pred", {fixture::permuted(gt.pages[0], {3, 2, 1, 0}), fixture::permuted(gt.pages[1], {1, 0, 3, 2})}};
  EvalConfig config;
  config.strategies = {{order::OrderingKind::as_is}, {order::OrderingKind::reference_guided, 0.9}};
  const auto report = evaluate(gt, {offline("e", pred)}, config);
  REQUIRE(report.corpus.size() == 2);
  CHECK(report.corpus[0].strategy == "as_is");
  CHECK(report.corpus[0].crr < 1.0);
  CHECK(report.corpus[0].fca == 1.0);
  CHECK(report.corpus[1].strategy == "ref");
  CHECK(report.corpus[1].crr == 1.0);
  CHECK(report.corpus[1].fca == 1.0);
}

TEST_CASE("evaluate: missing pages score as empty") {
  Corpus gt{"gt", {fixture::stacked_page("a", {"abcdefghij"}), fixture::stacked_page("b", {"klmnopqrst"})}};
  Corpus pred{"pred", {fixture::text_page("a", {"abcdefghij"})}};
  const auto report = evaluate(gt, {offline("e", pred)}, EvalConfig{});
  CHECK(report.pages[1].failed);
  CHECK(report.pages[1].crr == 0.0);
  // (1.0 * 10 + 0.0 * 10) / 20
  CHECK(report.corpus[0].crr == doctest::Approx(0.5));
  Corpus stray{"pred", {fixture::text_page("zzz", {"x"})}};
  CHECK_THROWS_AS(evaluate(gt, {offline("e", stray)}, EvalConfig{}), UnknownPage);
}

TEST_CASE("reports") {
  std::mt19937_64 rng(8);
  Corpus gt, noisy;
  for (int k = 0; k < 6; ++k) {
    auto page = fixture::stacked_page("p" + std::to_string(k), fixture::random_lines(rng, 6, 10, 40));
    gt.pages.push_back(page);
    page.lines[0].text += " xyz";
    std::swap(page.lines[1].order_index, page.lines[2].order_index);
    noisy.pages.push_back(page);
  }
  auto second = offline("second", noisy);
  second.detector = "det|b";
  for (const auto& p : noisy.pages) second.timings.push_back({p.page_id, {{"all", 0.125}}, {}});
  EvalConfig config;
  config.strategies = {{order::OrderingKind::as_is}, {order::OrderingKind::blind_centroid}};
  config.jobs = 1;
  const auto report = evaluate(gt, {offline("first", gt), second}, config);

  SUBCASE("markdown") {
    EvalConfig one = config;
    one.strategies = {{}};
    const auto single = evaluate(gt, {offline("first", gt), second}, one);
    const auto md = report_markdown(single);
    std::istringstream in(md);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) rows += line.rfind("| ", 0) == 0 ? 1 : 0;
    CHECK(rows == 3);  // header + 2 engines
    CHECK(md.find("| Detector | Engine | CRR | Flex Character Acc. | Inference Time |") == 0);
    CHECK(md.find("Config digest: `" + single.config_digest + "`") != std::string::npos);
    CHECK(md.find("0.12 |") != std::string::npos);
    CHECK(md.find("det\\|b") != std::string::npos);
  }
  SUBCASE("json round trip") {
    const auto text = render_report(report, ReportFormat::json);
    CHECK(report_from_json(nlohmann::json::parse(text)) == report);
  }
  SUBCASE("csv rows and self-consistency") {
    const auto csv = report_csv(report);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "page_id,engine,strategy,crr,fca,seconds,gt_chars,failed");
    std::map<std::string, std::vector<metrics::PageMetric>> crr;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      std::vector<std::string> f;
      std::istringstream fs(line);
      for (std::string cell; std::getline(fs, cell, ',');) f.push_back(cell);
      REQUIRE(f.size() >= 7);
      crr[f[1] + "/" + f[2]].push_back({f[0], std::stod(f[3]), std::stoul(f[6])});
    }
    CHECK(rows == 6 * 2 * 2);
    for (const auto& row : report.corpus) {
      CHECK(metrics::aggregate(crr.at(row.engine + "/" + row.strategy)).weighted == row.crr);
    }
  }
  SUBCASE("parallel evaluation gives the same report") {
    EvalConfig wide = config;
    wide.jobs = 4;
    const auto again = evaluate(gt, {offline("first", gt), second}, wide);
    CHECK(render_report(again, ReportFormat::json) == render_report(report, ReportFormat::json));
    CHECK(again.config_digest == report.config_digest);
  }
  SUBCASE("digest follows the settings") {
    EvalConfig other = config;
    other.strategies[1].row_overlap_threshold = 0.6;
    CHECK(config_digest(other) != report.config_digest);
    other = config;
    other.policy.charset = ingest::builtin_charset("english95");
    CHECK(config_digest(other) != report.config_digest);
  }
  SUBCASE("emit to a file") {
    const auto path = fs::temp_directory_path() / "ocreval_report.md";
    emit_report(report, ReportFormat::markdown, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == report_markdown(report));
    fs::remove(path);
    CHECK_THROWS_AS(emit_report(report, ReportFormat::csv, "/nonexistent/dir/r.csv"), IoError);
  }
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.0, 0.0, 1e-300}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("cli exit codes") {
  TempDir dir("cli");
  fs::create_directories(dir.path / "gt");
  ingest::save_page(fixture::stacked_page("a", {"line one"}), dir.path / "gt" / "a.json");
  fs::create_directories(dir.path / "bad");
  ingest::save_page(fixture::text_page("a", {"no geometry"}), dir.path / "bad" / "a.json");
  const std::string gt = (dir.path / "gt").string();
  CHECK(run_cli("validate " + gt) == 0);
  CHECK(run_cli("validate " + (dir.path / "bad").string()) == 2);
  CHECK(run_cli("eval --gt " + gt + " --pred " + gt) == 0);
  CHECK(run_cli("eval --gt " + (dir.path / "bad").string() + " --pred " + gt) == 2);
  CHECK(run_cli("eval --gt " + gt + " --pred " + gt + " --charset nosuchset") == 1);
  CHECK(run_cli("eval --gt " + gt + " --pred " + gt + " --order sideways") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("stats " + gt) == 0);
}
