#include "superres/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace superres {

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_number(std::uint64_t value) {
    return std::to_string(value);
}

double parse_number(std::string_view cell) {
    if (cell == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (cell == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (cell == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    double v = 0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw std::invalid_argument("not a number: '" + std::string(cell) + "'");
    }
    return v;
}

std::string ResultTable::to_csv() const {
    std::string out;
    for (const auto &[k, v] : metadata) {
        out += "# " + k + ": " + v + "\n";
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += (i ? "," : "") + columns[i];
    }
    out += "\n";
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "") + row[i];
        }
        out += "\n";
    }
    return out;
}

std::string ResultTable::to_json() const {
    nlohmann::ordered_json doc;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto &[k, v] : metadata) {
        doc["metadata"][k] = v;
    }
    doc["columns"] = columns;
    auto rows_json = nlohmann::ordered_json::array();
    for (const auto &row : rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto &cell : row) {
            // Finite numbers are emitted as JSON numbers; flags and inf/nan stay strings.
            try {
                double v = parse_number(cell);
                if (std::isfinite(v)) {
                    r.push_back(v);
                    continue;
                }
            } catch (const std::invalid_argument &) {
            }
            r.push_back(cell);
        }
        rows_json.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows_json);
    return doc.dump(2) + "\n";
}

namespace {

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        cells.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

ResultTable parse_json_table(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("table parse error: ") + e.what());
    }
    ResultTable t;
    if (!doc.contains("columns") || !doc.contains("rows")) {
        throw std::invalid_argument("JSON table needs 'columns' and 'rows'");
    }
    // The metadata order of the original table is not preserved by the
    // reader; only lookups are needed downstream.
    if (doc.contains("metadata")) {
        for (const auto &[k, v] : doc["metadata"].items()) {
            t.metadata.emplace_back(k, v.get<std::string>());
        }
    }
    t.columns = doc["columns"].get<std::vector<std::string>>();
    for (const auto &r : doc["rows"]) {
        std::vector<std::string> row;
        for (const auto &cell : r) {
            if (cell.is_string()) {
                row.push_back(cell.get<std::string>());
            } else if (cell.is_number_unsigned()) {
                row.push_back(format_number(cell.get<std::uint64_t>()));
            } else {
                row.push_back(format_number(cell.get<double>()));
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace

ResultTable ResultTable::parse(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        return parse_json_table(text);
    }
    ResultTable t;
    std::istringstream in{std::string(text)};
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            auto colon = line.find(": ");
            if (colon == std::string::npos || colon < 2) {
                throw std::invalid_argument("malformed metadata line: " + line);
            }
            t.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
            continue;
        }
        if (!have_header) {
            t.columns = split_csv(line);
            have_header = true;
            continue;
        }
        auto cells = split_csv(line);
        if (cells.size() != t.columns.size()) {
            throw std::invalid_argument("row has " + std::to_string(cells.size()) + " cells, header has " +
                                        std::to_string(t.columns.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    if (!have_header) {
        throw std::invalid_argument("table has no header row");
    }
    return t;
}

std::optional<std::string> ResultTable::meta(std::string_view key) const {
    for (const auto &[k, v] : metadata) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

std::size_t ResultTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return i;
        }
    }
    throw std::invalid_argument("table has no column '" + std::string(name) + "'");
}

std::vector<double> ResultTable::numeric_column(std::string_view name) const {
    std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &row : rows) {
        out.push_back(parse_number(row.at(c)));
    }
    return out;
}

}  // namespace superres
