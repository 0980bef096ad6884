#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rqsl::cli {

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// Comma-separated, header first, shortest round-trip numbers, '\n' line ends.
std::string to_csv(const Table& table);
nlohmann::ordered_json to_json(const Table& table);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file. An empty path writes to stdout.
void write_output(const std::string& content, const std::filesystem::path& path);

}  // namespace rqsl::cli
