#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace powertwin::io {

/// Delimiter-separated text: one header row, data rows, and any `#` comment
/// lines preceding the header.
struct TextTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    char delimiter = ',';

    /// Index of a header field, matched after normalize_header(). Empty when absent.
    std::optional<std::size_t> column(std::string_view name) const;
};

/// Parses text; when `delimiter` is not given it is chosen among `;`, tab and `,`
/// by frequency in the header line.
TextTable parse_delimited(std::string_view text, std::optional<char> delimiter = {});
TextTable read_delimited(const std::filesystem::path& path, std::optional<char> delimiter = {});

/// Lower-cases and strips whitespace and non-ASCII bytes, so that
/// "Ambient Temperature [°C]" and "ambienttemperature[C]" compare equal
/// regardless of the source file's encoding.
std::string normalize_header(std::string_view name);

/// Shortest decimal text that parses back to the identical double. NaN -> "".
std::string format_double(double value);
std::string format_fixed(double value, int decimals);

/// Parses a decimal; empty, "nan" or malformed text yields NaN.
double parse_double(std::string_view text);

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view line, char delimiter);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

} // namespace powertwin::io
