#include "ocreval/bench/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ocreval::bench {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

std::string percent(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
  return buf;
}

std::string engine_label(const CorpusRow& row, const std::string& reference_label) {
  if (row.strategy == "blind") return "B.O + " + row.engine;
  if (row.strategy == "ref") return reference_label + " + " + row.engine;
  return row.engine;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  if (name == "json") return ReportFormat::json;
  throw Error("unknown report format '" + std::string(name) + "' (csv, markdown, json)");
}

std::string report_csv(const EvalReport& report) {
  std::string out = "page_id,engine,strategy,crr,fca,seconds,gt_chars,failed\n";
  for (const auto& r : report.pages) {
    out += csv_field(r.page_id) + ',' + csv_field(r.engine) + ',' + r.strategy + ',' +
           format_double(r.crr) + ',' + format_double(r.fca) + ',' +
           (r.seconds ? format_double(*r.seconds) : std::string()) + ',' +
           std::to_string(r.gt_chars) + ',' + (r.failed ? "1" : "0") + '\n';
  }
  return out;
}

std::string report_markdown(const EvalReport& report) {
  std::string out =
      "| Detector | Engine | CRR | Flex Character Acc. | Inference Time |\n"
      "|---|---|---:|---:|---:|\n";
  for (const auto& r : report.corpus) {
    out += "| " + md_cell(r.detector.empty() ? "-" : r.detector) + " | " +
           md_cell(engine_label(r, report.reference_label)) + " | " + percent(r.crr) + " | " +
           percent(r.fca) + " | ";
    if (r.mean_seconds) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f", *r.mean_seconds);
      out += buf;
    } else {
      out += "-";
    }
    out += " |\n";
  }
  out += "\nConfig digest: `" + report.config_digest + "`\n";
  return out;
}

json report_to_json(const EvalReport& report) {
  json pages = json::array();
  for (const auto& r : report.pages) {
    pages.push_back({{"page_id", r.page_id},
                     {"engine", r.engine},
                     {"strategy", r.strategy},
                     {"crr", r.crr},
                     {"fca", r.fca},
                     {"seconds", optional_number(r.seconds)},
                     {"gt_chars", r.gt_chars},
                     {"failed", r.failed}});
  }
  json corpus = json::array();
  for (const auto& r : report.corpus) {
    corpus.push_back({{"detector", r.detector},
                      {"engine", r.engine},
                      {"strategy", r.strategy},
                      {"crr", r.crr},
                      {"fca", r.fca},
                      {"crr_unweighted", r.crr_unweighted},
                      {"fca_unweighted", r.fca_unweighted},
                      {"mean_seconds", optional_number(r.mean_seconds)},
                      {"pages", r.pages},
                      {"failed_pages", r.failed_pages},
                      {"gt_chars", r.gt_chars}});
  }
  return json{{"config", report.config},
              {"config_digest", report.config_digest},
              {"reference_label", report.reference_label},
              {"pages", pages},
              {"corpus", corpus}};
}

EvalReport report_from_json(const json& j) {
  try {
    EvalReport report;
    report.config = j.at("config");
    report.config_digest = j.at("config_digest").get<std::string>();
    report.reference_label = j.at("reference_label").get<std::string>();
    for (const auto& p : j.at("pages")) {
      PageRow r;
      r.page_id = p.at("page_id").get<std::string>();
      r.engine = p.at("engine").get<std::string>();
      r.strategy = p.at("strategy").get<std::string>();
      r.crr = p.at("crr").get<double>();
      r.fca = p.at("fca").get<double>();
      r.seconds = read_optional(p.at("seconds"));
      r.gt_chars = p.at("gt_chars").get<std::size_t>();
      r.failed = p.at("failed").get<bool>();
      report.pages.push_back(std::move(r));
    }
    for (const auto& c : j.at("corpus")) {
      CorpusRow r;
      r.detector = c.at("detector").get<std::string>();
      r.engine = c.at("engine").get<std::string>();
      r.strategy = c.at("strategy").get<std::string>();
      r.crr = c.at("crr").get<double>();
      r.fca = c.at("fca").get<double>();
      r.crr_unweighted = c.at("crr_unweighted").get<double>();
      r.fca_unweighted = c.at("fca_unweighted").get<double>();
      r.mean_seconds = read_optional(c.at("mean_seconds"));
      r.pages = c.at("pages").get<std::size_t>();
      r.failed_pages = c.at("failed_pages").get<std::size_t>();
      r.gt_chars = c.at("gt_chars").get<std::size_t>();
      report.corpus.push_back(std::move(r));
    }
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid report JSON: ") + e.what());
  }
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv:
      return report_csv(report);
    case ReportFormat::markdown:
      return report_markdown(report);
    case ReportFormat::json:
      return report_to_json(report).dump(2) + "\n";
  }
  return {};
}

void emit_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path) {
  const std::string text = render_report(report, format);
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report to " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing report to " + path.string());
}

}  // namespace ocreval::bench
