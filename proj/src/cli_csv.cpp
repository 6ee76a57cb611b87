#include "esnoise/cli/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace esnoise::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv_string(const Table& table) {
    if (table.header.empty() || table.rows.empty())
        throw IOError("refusing to emit an empty table");
    std::string out;
    for (size_t c = 0; c < table.header.size(); ++c) {
        if (c) out += ',';
        out += table.header[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw IOError("row width does not match the header");
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (const double* d = std::get_if<double>(&row[c]))
                out += format_double(*d);
            else
                out += std::get<std::string>(row[c]);
        }
        out += '\n';
    }
    return out;
}

void emit_csv(const Table& table, const std::filesystem::path& path) {
    const std::string text = to_csv_string(table);  // may throw, before create
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IOError("cannot open " + path.string());
    os << text;
    if (!os) throw IOError("write failed for " + path.string());
}

Table parse_csv(const std::string& text) {
    Table table;
    std::istringstream is(text);
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            const size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (header) {
            table.header = std::move(fields);
            header = false;
            continue;
        }
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (auto& f : fields) {
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end && *end == '\0' && end != f.c_str())
                row.emplace_back(v);
            else
                row.emplace_back(std::move(f));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace esnoise::cli
