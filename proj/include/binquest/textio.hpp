#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace binquest {

// Locale-independent number formatting (std::to_chars). All artifact files go
// through these helpers so output bytes are stable across platforms.

// Fixed-point with exactly `decimals` digits; -0 is normalized to 0.
std::string fmt_fixed(double v, int decimals);

// Shortest decimal that round-trips; infinities render as "inf"/"-inf".
std::string fmt_shortest(double v);

// Minimal strict CSV: comma-separated, no quoting, LF line endings.
// Fields must not contain commas, quotes or newlines.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no);

// Splits on '\n', tolerating one trailing '\r' per line (rejected later by
// loaders that require canonical LF input).
std::vector<std::string> split_lines(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Replaces every character outside [A-Za-z0-9._-] with '_' for artifact names.
std::string sanitize_filename(std::string_view name);

}  // namespace binquest
