#pragma once

// Serialization of probe tables (CSV, JSON) and self-contained SVG convergence plots.

#include <filesystem>
#include <string>
#include <string_view>

#include "speclab/asymptotics.hpp"

namespace speclab {

enum class TableFormat { csv, json };

/// Header "abscissa,raw,ratio,predicted" plus any extra columns; 17 significant digits, LF
/// line endings. Absent ratios and predictions are blank cells.
std::string to_csv(const ProbeResult& result);

std::string to_json(const ProbeResult& result);
/// Inverse of to_json; doubles round-trip bit-exactly.
ProbeResult from_json(std::string_view text);

/// Fit, prediction, and relative deviation of the last ratio from the predicted limit.
std::string summary_json(const ProbeResult& result);

/// SVG 1.1 document: log-log panel of (abscissa, raw) with the fitted line, and a ratio panel
/// with a reference line at the predicted limit when one exists.
std::string render_svg(const ProbeResult& result);

/// ResourceError when the file cannot be written; DomainError for an empty result.
void write_table(const ProbeResult& result, TableFormat format, const std::filesystem::path& file);
void render_plot(const ProbeResult& result, const std::filesystem::path& file);

/// Writes text to file, throwing ResourceError on failure.
void write_text_file(const std::filesystem::path& file, std::string_view text);

}  // namespace speclab
