#include "report.hpp"

#include "json.hpp"

#include "photocount/errors.hpp"
#include "photocount/io.hpp"

namespace photocount::cli {

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::Csv;
    if (text == "json") return Format::Json;
    throw DomainError("unknown format '" + text + "' (expected csv|json)");
}

void write_csv(std::ostream& out, const Report& report) {
    if (!report.columns.empty()) {
        for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "," : "") << report.columns[i];
        out << '\n';
        for (const auto& row : report.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                if (row[i]) out << format_real(*row[i]);
            }
            out << '\n';
        }
    }
    for (const auto& [key, value] : report.summary) {
        out << "# " << key << ',';
        if (const auto* d = std::get_if<double>(&value)) out << format_real(*d);
        else if (const auto* i = std::get_if<std::uint64_t>(&value)) out << *i;
        else if (const auto* s = std::get_if<std::string>(&value)) out << *s;
        else out << (std::get<bool>(value) ? "true" : "false");
        out << '\n';
    }
}

void write_json(std::ostream& out, const Report& report) {
    nlohmann::ordered_json doc;
    doc["columns"] = report.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        auto cells = nlohmann::ordered_json::array();
        for (const auto& cell : row) cells.push_back(cell ? nlohmann::ordered_json(*cell) : nullptr);
        rows.push_back(std::move(cells));
    }
    doc["rows"] = std::move(rows);
    auto summary = nlohmann::ordered_json::object();
    for (const auto& [key, value] : report.summary)
        std::visit([&](const auto& v) { summary[key] = v; }, value);
    doc["summary"] = std::move(summary);
    out << doc.dump(2) << '\n';
}

void write_report(std::ostream& out, const Report& report, Format format) {
    if (format == Format::Csv) write_csv(out, report);
    else write_json(out, report);
}

}  // namespace photocount::cli
