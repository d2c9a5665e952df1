#pragma once

#include <string>
#include <vector>

namespace ilt {

// Rectangular result table with string cells. Numbers are formatted once, at
// insertion, so emit -> parse -> emit is byte-identical.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
};

// %.17g: round-trips every double and is locale-independent here.
std::string format_double(double v);
std::string format_int(std::int64_t v);

// RFC 4180: CRLF line endings, quoting only when a cell contains a comma,
// quote, CR or LF.
std::string to_csv(const Table& t);
Table from_csv(const std::string& text);

// One JSON object per row, keys = column names; cells that parse fully as
// finite numbers are emitted as numbers.
std::string to_json_rows(const Table& t);

void write_text_file(const std::string& path, const std::string& text);

} // namespace ilt
