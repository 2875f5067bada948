#pragma once

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pendular::cli {

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<double, long long, std::string>;
using Json = nlohmann::ordered_json;

/// One command's data: column names, rows, and metadata that travels with it.
struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    Json metadata = Json::object();
};

enum class Format { csv, json };

/// CSV: '.' decimal, ',' separator, LF, 12 significant digits. The first line
/// names the schema, metadata follows as '#' comments, then the header row.
void write_csv(const Table& t, std::ostream& out);
void write_json(const Table& t, std::ostream& out);
void write_table(const Table& t, Format f, std::ostream& out);

[[nodiscard]] std::string format_number(double v);
[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] std::string utc_timestamp();

/// Writes `payload` to `path` and a sibling `<path>.manifest.json`.
void write_with_manifest(const std::filesystem::path& path, const std::string& payload,
                         const std::string& command, const Json& parameters);

}  // namespace pendular::cli
