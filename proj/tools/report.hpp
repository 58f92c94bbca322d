#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace photocount::cli {

enum class Format { Csv, Json };

Format parse_format(const std::string& text);

// A command's result: an optional table plus ordered key/value summary.
// Both renderings carry the same numbers at full round-trip precision.
struct Report {
    using Cell = std::optional<double>;  // empty cell = not applicable
    using Value = std::variant<double, std::uint64_t, std::string, bool>;

    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Value>> summary;

    void add(std::string key, Value value) { summary.emplace_back(std::move(key), std::move(value)); }
};

// CSV: header row, data rows, then "# key,value" summary lines.
void write_csv(std::ostream& out, const Report& report);
// JSON object {"columns", "rows", "summary"}; empty cells become null.
void write_json(std::ostream& out, const Report& report);
void write_report(std::ostream& out, const Report& report, Format format);

}  // namespace photocount::cli
