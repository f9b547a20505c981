#include "ocreval/bench/engine.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "ocreval/bench/subprocess.hpp"
#include "ocreval/ingest/page_io.hpp"

namespace ocreval::bench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

std::string safe_component(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

struct PageOutcome {
  PageAnnotation prediction;
  TimingRecord timing;
  std::optional<EngineFailure> failure;
};

}  // namespace

const char* to_string(StageLabel label) {
  return label == StageLabel::recognition_only ? "recognition_only" : "detection+recognition";
}

void EngineAdapter::validate() const {
  if (name.empty()) throw AdapterConfigError("engine adapter needs a name");
  for (const char* key : {"{input_image}", "{output_file}"}) {
    const std::size_t n = count_of(command_template, key);
    if (n != 1) {
      throw AdapterConfigError("engine '" + name + "': command template must contain " + key +
                               " exactly once (found " + std::to_string(n) + ")");
    }
    if (detection_template && count_of(*detection_template, key) != 1) {
      throw AdapterConfigError("engine '" + name + "': detection template must contain " + key +
                               " exactly once");
    }
  }
  if (!detection_template && count_of(command_template, "{detection_file}") != 0) {
    throw AdapterConfigError("engine '" + name + "': {detection_file} used without a detection template");
  }
  if (!(timeout_seconds > 0.0)) throw AdapterConfigError("engine '" + name + "': timeout must be positive");
}

EngineAdapter adapter_from_json(const json& j) {
  if (!j.is_object()) throw AdapterConfigError("engine entry must be an object");
  try {
    EngineAdapter a;
    a.name = j.at("name").get<std::string>();
    a.command_template = j.at("command").get<std::string>();
    a.timeout_seconds = j.value("timeout", 60.0);
    const std::string stage = j.value("stage", std::string("detection+recognition"));
    if (stage == "detection+recognition") {
      a.stage = StageLabel::detection_recognition;
    } else if (stage == "recognition_only") {
      a.stage = StageLabel::recognition_only;
    } else {
      throw AdapterConfigError("engine '" + a.name + "': unknown stage '" + stage + "'");
    }
    a.detector = j.value("detector", std::string());
    if (j.contains("detection_command") && !j["detection_command"].is_null()) {
      a.detection_template = j["detection_command"].get<std::string>();
    }
    return a;
  } catch (const json::exception& e) {
    throw AdapterConfigError(std::string("invalid engine entry: ") + e.what());
  }
}

json to_json(const EngineAdapter& a) {
  json j{{"name", a.name},
         {"command", a.command_template},
         {"timeout", a.timeout_seconds},
         {"stage", to_string(a.stage)},
         {"detector", a.detector}};
  if (a.detection_template) j["detection_command"] = *a.detection_template;
  return j;
}

std::vector<EngineAdapter> load_engine_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw AdapterConfigError("cannot open engine config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw AdapterConfigError(path.string() + ": " + e.what());
  }
  const json& list = j.is_object() && j.contains("engines") ? j["engines"] : j;
  if (!list.is_array() || list.empty()) {
    throw AdapterConfigError(path.string() + ": expected a non-empty list of engines");
  }
  std::vector<EngineAdapter> out;
  for (const auto& entry : list) {
    out.push_back(adapter_from_json(entry));
    out.back().validate();
  }
  return out;
}

double TimingRecord::reported_seconds() const {
  double total = 0.0;
  for (const auto& s : stages) {
    if (std::find(excluded_stages.begin(), excluded_stages.end(), s.stage) == excluded_stages.end()) {
      total += s.seconds;
    }
  }
  return total;
}

PageAnnotation parse_engine_output(const fs::path& file, const std::string& page_id) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("engine produced no output file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string content = ss.str();
  const auto first = content.find_first_not_of(" \t\r\n");
  PageAnnotation page;
  if (first != std::string::npos && content[first] == '{') {
    json j;
    try {
      j = json::parse(content);
    } catch (const json::parse_error& e) {
      throw ParseError(file.string() + ": " + e.what());
    }
    page = ingest::page_from_json(j, file.string());
  } else {
    std::istringstream lines(content);
    std::string raw;
    std::uint32_t index = 0;
    while (std::getline(lines, raw)) {
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      page.lines.push_back({std::to_string(index), raw, std::nullopt, index});
      ++index;
    }
  }
  page.page_id = page_id;
  return page;
}

EngineRun run_engine(const EngineAdapter& adapter, const Corpus& pages, const RunOptions& options) {
  adapter.validate();
  const fs::path out_dir = options.work_dir / safe_component(adapter.name);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<PageOutcome> outcomes(pages.pages.size());
  std::atomic<std::size_t> next{0};

  auto run_page = [&](const PageAnnotation& gt) {
    PageOutcome o;
    o.prediction.page_id = gt.page_id;
    o.timing.page_id = gt.page_id;
    auto fail = [&](std::string reason) {
      o.prediction.lines.clear();
      o.failure = EngineFailure{gt.page_id, std::move(reason)};
    };
    if (!gt.image_ref) {
      fail("page has no image_ref");
      return o;
    }
    fs::path image = *gt.image_ref;
    if (image.is_relative()) image = options.image_root / image;

    const std::string stem = safe_component(gt.page_id);
    const fs::path output = out_dir / (stem + ".out");
    const fs::path log = out_dir / (stem + ".log");
    fs::remove(output, ec);
    const auto timeout = std::chrono::duration<double>(adapter.timeout_seconds);

    std::string command = adapter.command_template;
    if (adapter.detection_template) {
      const fs::path detection = out_dir / (stem + ".det");
      fs::remove(detection, ec);
      std::string det = substitute(*adapter.detection_template, "{input_image}", shell_quote(image.string()));
      det = substitute(det, "{output_file}", shell_quote(detection.string()));
      const ProcessResult r = run_shell(det, timeout, out_dir / (stem + ".det.log"));
      o.timing.stages.push_back({"detection", r.wall_seconds});
      if (r.timed_out || r.exit_code != 0) {
        fail(r.timed_out ? "detection timed out" : "detection command failed (exit " +
                                                       std::to_string(r.exit_code) + ") " + r.error);
        return o;
      }
      command = substitute(command, "{detection_file}", shell_quote(detection.string()));
    }
    command = substitute(command, "{input_image}", shell_quote(image.string()));
    command = substitute(command, "{output_file}", shell_quote(output.string()));

    const ProcessResult r = run_shell(command, timeout, log);
    const bool split = adapter.detection_template.has_value();
    o.timing.stages.push_back({split ? "recognition" : to_string(adapter.stage), r.wall_seconds});
    if (adapter.stage == StageLabel::recognition_only && split) o.timing.excluded_stages = {"detection"};

    if (r.timed_out) {
      fail("timed out after " + std::to_string(adapter.timeout_seconds) + " s");
    } else if (r.exit_code != 0) {
      fail("command failed (exit " + std::to_string(r.exit_code) + ") " + r.error);
    } else {
      try {
        o.prediction = parse_engine_output(output, gt.page_id);
      } catch (const Error& e) {
        fail(e.what());
      }
    }
    return o;
  };

  auto worker = [&] {
    for (std::size_t k = next++; k < pages.pages.size(); k = next++) {
      outcomes[k] = run_page(pages.pages[k]);
    }
  };
  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(pages.pages.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }

  EngineRun run;
  run.engine = adapter.name;
  run.predictions.name = adapter.name;
  for (auto& o : outcomes) {
    run.predictions.pages.push_back(std::move(o.prediction));
    run.timings.push_back(std::move(o.timing));
    if (o.failure) run.failures.push_back(std::move(*o.failure));
  }
  return run;
}

}  // namespace ocreval::bench
