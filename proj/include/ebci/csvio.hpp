#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ebci::csvio {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

// Strict parse of a full field; BadInput on trailing junk or empty.
double parse_double(std::string_view field);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // index of a header column; BadInput if absent
    std::size_t column(std::string_view name) const;
};

// RFC 4180 reader: quoted fields, doubled quotes, CRLF and LF endings,
// embedded newlines inside quotes. First record is the header.
CsvTable parse_csv(std::string_view text);

// RFC 4180 writer: LF line endings, fields quoted only when needed.
std::string emit_csv(const CsvTable& table);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace ebci::csvio
