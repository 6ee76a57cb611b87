#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace esnoise::cli {

class IOError : public std::runtime_error {
public:
    explicit IOError(const std::string& what) : std::runtime_error(what) {}
};

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

// Reals are rendered with 17 significant digits so the emitted text parses
// back to the identical double.
std::string format_double(double v);

// Header row plus one newline-terminated line per data row. Throws IOError
// for an empty table (no file is created) or on write failure.
void emit_csv(const Table& table, const std::filesystem::path& path);
std::string to_csv_string(const Table& table);

// Minimal reader for the files this tool writes (no quoting, comma only).
Table parse_csv(const std::string& text);

}  // namespace esnoise::cli
