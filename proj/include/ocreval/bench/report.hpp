#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ocreval/bench/evaluate.hpp"

namespace ocreval::bench {

enum class ReportFormat { csv, markdown, json };

ReportFormat parse_report_format(std::string_view name);

/// CSV: one row per (page, engine, strategy).
std::string report_csv(const EvalReport& report);

/// Markdown comparison table, one body row per (engine, strategy), with
/// the config digest as a footer line. Percentages use two decimals.
std::string report_markdown(const EvalReport& report);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

std::string render_report(const EvalReport& report, ReportFormat format);

/// Writes the rendered report; "-" writes to stdout. Throws IoError.
void emit_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace ocreval::bench
