#include "ilt/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "ilt/errors.hpp"
#include "json.hpp"

namespace ilt {

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        fail(errc::config_invalid, "row width does not match the header");
    rows.push_back(std::move(cells));
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

namespace {

bool needs_quoting(const std::string& cell) {
    return cell.find_first_of(",\"\r\n") != std::string::npos;
}

void append_cell(std::string& out, const std::string& cell) {
    if (!needs_quoting(cell)) {
        out += cell;
        return;
    }
    out += '"';
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

} // namespace

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j) out += ',';
        append_cell(out, t.columns[j]);
    }
    out += "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            append_cell(out, row[j]);
        }
        out += "\r\n";
    }
    return out;
}

Table from_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string cell;
    bool quoted = false, any = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto end_cell = [&] {
        record.push_back(std::move(cell));
        cell.clear();
    };
    auto end_record = [&] {
        end_cell();
        records.push_back(std::move(record));
        record.clear();
        any = false;
    };
    while (i < n) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    cell += '"';
                    i += 2;
                } else {
                    quoted = false;
                    ++i;
                }
            } else {
                cell += c;
                ++i;
            }
            continue;
        }
        if (c == '"' && cell.empty() && !any) {
            quoted = true;
            any = true;
            ++i;
        } else if (c == ',') {
            end_cell();
            any = false;
            ++i;
        } else if (c == '\r' && i + 1 < n && text[i + 1] == '\n') {
            end_record();
            i += 2;
        } else if (c == '\n') {
            end_record();
            ++i;
        } else {
            cell += c;
            any = true;
            ++i;
        }
    }
    if (any || !cell.empty() || !record.empty()) end_record();
    if (quoted) fail(errc::io_error, "unterminated quoted field");
    if (records.empty()) fail(errc::io_error, "empty CSV input");

    Table t;
    t.columns = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) t.add_row(std::move(records[r]));
    return t;
}

std::string to_json_rows(const Table& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t j = 0; j < row.size(); ++j) {
            const std::string& cell = row[j];
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (!cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(v))
                obj[t.columns[j]] = v;
            else
                obj[t.columns[j]] = cell;
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
    out << text;
    if (!out) fail(errc::io_error, "write failed: " + path);
}

} // namespace ilt
