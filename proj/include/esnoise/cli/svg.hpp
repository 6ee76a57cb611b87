#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "esnoise/cli/csv.hpp"

namespace esnoise::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool scatter = false;  // points instead of a polyline
};

struct ChartMeta {
    std::string title;
    std::string x_label;
    std::string y_label;
};

// Standalone minimal chart: axes, ticks, legend, one polyline or point set
// per series. Non-finite samples are skipped. Throws IOError when the
// series set is empty or contains no finite points.
void emit_svg(const std::vector<Series>& series, const ChartMeta& meta,
              const std::filesystem::path& path);
std::string to_svg_string(const std::vector<Series>& series,
                          const ChartMeta& meta);

}  // namespace esnoise::cli
