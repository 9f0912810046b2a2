#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "netab/experiment.hpp"

namespace netab {

enum class ReportFormat { Csv, Json, Markdown };

std::optional<ReportFormat> parse_report_format(std::string_view name);
std::string_view report_format_extension(ReportFormat f);

/// Deterministic serialization. CSV carries one summary row per (beta,
/// estimator) followed by one raw row per replication estimate; Markdown lays
/// estimators out as rows and beta vectors as columns, with the best cell in
/// bold and a star on cells whose Welch p-value is below the report's alpha.
void export_report(const StudyReport& report, ReportFormat format, std::ostream& out);
std::string export_report(const StudyReport& report, ReportFormat format);

/// Inverse of the JSON export. Throws ParseError on malformed input.
StudyReport report_from_json(std::string_view text);

/// Formats a double with round-trip precision.
std::string format_double(double v);

}  // namespace netab
