#include "gei/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gei/errors.hpp"

namespace gei {
namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    CsvTable table;
    std::vector<std::vector<double>> columns;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split(line);
        if (!have_header) {
            for (auto& f : fields) table.header.push_back(trim(f));
            columns.resize(table.header.size());
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                            " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const std::string f = trim(fields[j]);
            const std::string where = "line " + std::to_string(line_no) + ", column " + std::to_string(j + 1) + " (" +
                                      table.header[j] + ")";
            if (f.empty() || f == "NA" || f == "NaN" || f == "nan") throw DataError(where + ": missing value");
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
                throw DataError(where + ": '" + f + "' is not a number");
            }
            columns[j].push_back(v);
        }
    }
    if (!have_header) throw DataError("empty CSV input: a header row is required");
    table.values = Matrix::from_columns(columns);
    if (table.values.rows() == 0) table.values = Matrix(0, table.header.size());
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_csv(ss.str());
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace gei
