#include "ebci/csvio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ebci/errors.hpp"

namespace ebci::csvio {

std::string format_double(double x)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw NumericError("failed to format a double");
    return std::string(buf, ptr);
}

double parse_double(std::string_view field)
{
    double out = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw BadInput("not a number: '" + std::string(field) + "'");
    return out;
}

std::size_t CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw BadInput("missing column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;  // current record has content (guards trailing newline)

    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        any = true;
    };
    const auto end_record = [&] {
        if (any || !record.empty()) {
            end_field();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        }
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                any = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field += c;
                any = true;
        }
    }
    if (quoted) throw BadInput("unterminated quoted field");
    end_record();

    if (records.empty()) throw BadInput("CSV input is empty");
    CsvTable t;
    t.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.header.size())
            throw BadInput("CSV row " + std::to_string(r) + " has " +
                           std::to_string(records[r].size()) + " fields, header has " +
                           std::to_string(t.header.size()));
        t.rows.push_back(std::move(records[r]));
    }
    return t;
}

namespace {

void append_field(std::string& out, const std::string& f)
{
    const bool needs_quotes =
        f.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) {
        out += f;
        return;
    }
    out += '"';
    for (const char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

void append_record(std::string& out, const std::vector<std::string>& rec)
{
    for (std::size_t i = 0; i < rec.size(); ++i) {
        if (i) out += ',';
        append_field(out, rec[i]);
    }
    out += '\n';
}

}  // namespace

std::string emit_csv(const CsvTable& table)
{
    std::string out;
    append_record(out, table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw BadInput("CSV row width does not match header");
        append_record(out, row);
    }
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadInput("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadInput("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw BadInput("failed writing '" + path + "'");
}

}  // namespace ebci::csvio
