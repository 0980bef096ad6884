#include "rqsl/cli/output.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

#include "rqsl/cli/params.hpp"

namespace rqsl::cli {

namespace {

std::string csv_field(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
    const std::string& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

nlohmann::ordered_json json_value(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        if (!std::isfinite(*d)) return nullptr;
        return *d;
    }
    if (const auto* i = std::get_if<long long>(&cell)) return *i;
    if (const auto* b = std::get_if<bool>(&cell)) return *b;
    return std::get<std::string>(cell);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add_row: column count mismatch");
    rows.push_back(std::move(row));
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_field(row[c]);
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json to_json(const Table& table) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = json_value(row[c]);
        arr.push_back(std::move(obj));
    }
    return arr;
}

void write_output(const std::string& content, const std::filesystem::path& path) {
    if (path.empty()) {
        std::cout << content << std::flush;
        return;
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw std::runtime_error("cannot move output into place at '" + path.string() + "': " + ec.message());
    }
}

}  // namespace rqsl::cli
