#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spherekern/serialization.hpp"

namespace spherekern::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

enum class Format { json, csv, text };

/// Runs one command. `args` excludes the program name. Reports go to `out`
/// (or the --output file), diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "60deg" -> pi/3; a bare number is taken as radians.
double parse_angle(const std::string& text);

/// Renders a report. CSV and text flatten nested fields to dotted / indexed keys.
std::string format_report(const Json& report, Format format);

}  // namespace spherekern::cli
