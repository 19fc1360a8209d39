#include "powertwin/table_io.hpp"

#include "powertwin/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace powertwin::io {

std::optional<std::size_t> TextTable::column(std::string_view name) const
{
    const std::string want = normalize_header(name);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (normalize_header(header[i]) == want) {
            return i;
        }
    }
    return std::nullopt;
}

std::string trim(std::string_view text)
{
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) {
        --e;
    }
    return std::string(text.substr(b, e - b));
}

std::vector<std::string> split(std::string_view line, char delimiter)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

static char detect_delimiter(std::string_view header_line)
{
    constexpr std::array<char, 3> candidates{';', '\t', ','};
    char best = ',';
    long best_count = 0;
    for (char c : candidates) {
        const long n = std::count(header_line.begin(), header_line.end(), c);
        if (n > best_count) {
            best = c;
            best_count = n;
        }
    }
    return best;
}

TextTable parse_delimited(std::string_view text, std::optional<char> delimiter)
{
    TextTable table;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (!have_header) {
            if (trim(line).empty()) {
                continue;
            }
            if (line.front() == '#') {
                table.comments.emplace_back(trim(line.substr(1)));
                continue;
            }
            // UTF-8 byte-order mark
            if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") {
                line.remove_prefix(3);
            }
            table.delimiter = delimiter.value_or(detect_delimiter(line));
            table.header = split(line, table.delimiter);
            have_header = true;
            continue;
        }
        if (trim(line).empty()) {
            continue;
        }
        table.rows.push_back(split(line, table.delimiter));
        if (end == text.size()) {
            break;
        }
    }
    return table;
}

TextTable read_delimited(const std::filesystem::path& path, std::optional<char> delimiter)
{
    return parse_delimited(read_text_file(path), delimiter);
}

std::string normalize_header(std::string_view name)
{
    std::string out;
    out.reserve(name.size());
    for (char ch : name) {
        const auto c = static_cast<unsigned char>(ch);
        if (c >= 0x80 || std::isspace(c)) {
            continue;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return {};
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

std::string format_fixed(double value, int decimals)
{
    if (std::isnan(value)) {
        return {};
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
    std::string out(buf.data(), res.ptr);
    if (out.size() > 1 && out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
        out.erase(0, 1); // no "-0.000"
    }
    return out;
}

double parse_double(std::string_view text)
{
    const std::string t = trim(text);
    if (t.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') {
        ++first;
    }
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return value;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw_io("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw_io("cannot write " + tmp.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw_io("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value)
{
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf.data(), 16);
}

} // namespace powertwin::io
