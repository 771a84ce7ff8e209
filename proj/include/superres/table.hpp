#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace superres {

/// Column-ordered result table with a key/value metadata block.
///
/// CSV layout: one "# key: value" line per metadata entry, then the header
/// row, then one comma-separated row per record, every line '\n'-terminated.
struct ResultTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    std::string to_json() const;

    /// Accepts either serialization.
    static ResultTable parse(std::string_view text);

    std::optional<std::string> meta(std::string_view key) const;
    std::size_t column(std::string_view name) const;
    std::vector<double> numeric_column(std::string_view name) const;

    bool operator==(const ResultTable &) const = default;
};

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);
std::string format_number(std::uint64_t value);
double parse_number(std::string_view cell);

}  // namespace superres
