#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocreval/core/model.hpp"

namespace ocreval::bench {

class AdapterConfigError : public Error {
 public:
  using Error::Error;
};

/// What the adapter's main command covers. A recognition-only adapter may
/// run a separate detection command first; that stage is timed but left
/// out of the reported per-page time.
enum class StageLabel { detection_recognition, recognition_only };

const char* to_string(StageLabel label);

/// One external OCR engine driven through a shell command.
///
/// `command_template` must contain `{input_image}` and `{output_file}`
/// exactly once each; it may also use `{detection_file}` when a
/// `detection_template` (same two placeholders) is configured.
struct EngineAdapter {
  std::string name;
  std::string command_template;
  double timeout_seconds = 60.0;
  StageLabel stage = StageLabel::detection_recognition;
  std::string detector;  // label for reports, e.g. the line detector used
  std::optional<std::string> detection_template;

  /// Throws AdapterConfigError.
  void validate() const;
};

EngineAdapter adapter_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EngineAdapter& adapter);

/// Engine config file: a JSON array of adapters, or {"engines": [...]}.
std::vector<EngineAdapter> load_engine_config(const std::filesystem::path& path);

struct StageTime {
  std::string stage;
  double seconds = 0.0;

  friend bool operator==(const StageTime&, const StageTime&) = default;
};

struct TimingRecord {
  std::string page_id;
  std::vector<StageTime> stages;
  std::vector<std::string> excluded_stages;

  /// Sum of the stages not listed in excluded_stages.
  double reported_seconds() const;

  friend bool operator==(const TimingRecord&, const TimingRecord&) = default;
};

struct EngineFailure {
  std::string page_id;
  std::string reason;
};

struct EngineRun {
  std::string engine;
  Corpus predictions;  // one page per input page; failed pages are empty
  std::vector<TimingRecord> timings;
  std::vector<EngineFailure> failures;
};

struct RunOptions {
  std::filesystem::path image_root;  // base for relative image_ref values
  std::filesystem::path work_dir;    // engine outputs and logs
  unsigned jobs = 0;                 // 0 = hardware concurrency
};

/// Runs the adapter once per page on a bounded pool of workers. A page
/// whose command fails, times out, or leaves unreadable output becomes an
/// empty prediction listed in `failures`; the run itself continues.
/// Throws AdapterConfigError before executing anything.
EngineRun run_engine(const EngineAdapter& adapter, const Corpus& pages, const RunOptions& options);

/// Parses an engine output file: a JSON page when the first non-blank
/// character is '{', plain text lines otherwise.
PageAnnotation parse_engine_output(const std::filesystem::path& file, const std::string& page_id);

}  // namespace ocreval::bench
