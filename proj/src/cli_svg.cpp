#include "esnoise/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace esnoise::cli {

namespace {

constexpr double kWidth = 840.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 90.0, kRight = 30.0, kTop = 50.0, kBottom = 60.0;

const char* kPalette[] = {"#2ca02c", "#ff7f0e", "#1f77b4",
                          "#9467bd", "#d62728", "#8c564b"};

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

}  // namespace

std::string to_svg_string(const std::vector<Series>& series,
                          const ChartMeta& meta) {
    Range rx, ry;
    size_t finite_points = 0;
    for (const auto& s : series) {
        const size_t n = std::min(s.x.size(), s.y.size());
        for (size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            rx.grow(s.x[i]);
            ry.grow(s.y[i]);
            ++finite_points;
        }
    }
    if (series.empty() || finite_points == 0)
        throw IOError("refusing to emit an empty chart");
    rx.pad();
    ry.pad();

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double v) {
        return kLeft + (v - rx.lo) / (rx.hi - rx.lo) * plot_w;
    };
    auto py = [&](double v) {
        return kTop + plot_h - (v - ry.lo) / (ry.hi - ry.lo) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           fmt(kWidth, "%.0f") + "\" height=\"" + fmt(kHeight, "%.0f") +
           "\" viewBox=\"0 0 " + fmt(kWidth, "%.0f") + " " +
           fmt(kHeight, "%.0f") + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(kWidth / 2, "%.1f") +
           "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">" + meta.title +
           "</text>\n";

    // axes
    svg += "<line x1=\"" + fmt(kLeft, "%.1f") + "\" y1=\"" +
           fmt(kTop + plot_h, "%.1f") + "\" x2=\"" + fmt(kLeft + plot_w, "%.1f") +
           "\" y2=\"" + fmt(kTop + plot_h, "%.1f") +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(kLeft, "%.1f") + "\" y1=\"" + fmt(kTop, "%.1f") +
           "\" x2=\"" + fmt(kLeft, "%.1f") + "\" y2=\"" +
           fmt(kTop + plot_h, "%.1f") + "\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 5.0;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / 5.0;
        const double tx = px(fx), ty = py(fy);
        svg += "<line x1=\"" + fmt(tx, "%.1f") + "\" y1=\"" +
               fmt(kTop + plot_h, "%.1f") + "\" x2=\"" + fmt(tx, "%.1f") +
               "\" y2=\"" + fmt(kTop + plot_h + 5, "%.1f") +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(tx, "%.1f") + "\" y=\"" +
               fmt(kTop + plot_h + 20, "%.1f") +
               "\" font-size=\"11\" text-anchor=\"middle\">" + fmt(fx) +
               "</text>\n";
        svg += "<line x1=\"" + fmt(kLeft - 5, "%.1f") + "\" y1=\"" +
               fmt(ty, "%.1f") + "\" x2=\"" + fmt(kLeft, "%.1f") + "\" y2=\"" +
               fmt(ty, "%.1f") + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(kLeft - 8, "%.1f") + "\" y=\"" +
               fmt(ty + 4, "%.1f") +
               "\" font-size=\"11\" text-anchor=\"end\">" + fmt(fy) +
               "</text>\n";
    }

    svg += "<text x=\"" + fmt(kLeft + plot_w / 2, "%.1f") + "\" y=\"" +
           fmt(kHeight - 14, "%.1f") +
           "\" font-size=\"13\" text-anchor=\"middle\">" + meta.x_label +
           "</text>\n";
    svg += "<text x=\"20\" y=\"" + fmt(kTop + plot_h / 2, "%.1f") +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
           "20 " +
           fmt(kTop + plot_h / 2, "%.1f") + ")\">" + meta.y_label +
           "</text>\n";

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        const auto& sr = series[s];
        const size_t n = std::min(sr.x.size(), sr.y.size());
        if (sr.scatter) {
            for (size_t i = 0; i < n; ++i) {
                if (!std::isfinite(sr.x[i]) || !std::isfinite(sr.y[i])) continue;
                svg += "<circle cx=\"" + fmt(px(sr.x[i]), "%.2f") + "\" cy=\"" +
                       fmt(py(sr.y[i]), "%.2f") + "\" r=\"2.4\" fill=\"" +
                       color + "\"/>\n";
            }
        } else {
            std::string points;
            auto flush = [&] {
                if (points.empty()) return;
                svg += "<polyline fill=\"none\" stroke=\"" +
                       std::string(color) + "\" stroke-width=\"1.6\" points=\"" +
                       points + "\"/>\n";
                points.clear();
            };
            for (size_t i = 0; i < n; ++i) {
                if (!std::isfinite(sr.x[i]) || !std::isfinite(sr.y[i])) {
                    flush();  // break the line at gaps
                    continue;
                }
                points += fmt(px(sr.x[i]), "%.2f") + "," +
                          fmt(py(sr.y[i]), "%.2f") + " ";
            }
            flush();
        }
        const double ly = kTop + 16.0 * double(s);
        svg += "<rect x=\"" + fmt(kLeft + plot_w - 150, "%.1f") + "\" y=\"" +
               fmt(ly, "%.1f") + "\" width=\"12\" height=\"4\" fill=\"" +
               color + "\"/>\n";
        svg += "<text x=\"" + fmt(kLeft + plot_w - 132, "%.1f") + "\" y=\"" +
               fmt(ly + 5, "%.1f") + "\" font-size=\"11\">" + sr.label +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_svg(const std::vector<Series>& series, const ChartMeta& meta,
              const std::filesystem::path& path) {
    const std::string text = to_svg_string(series, meta);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IOError("cannot open " + path.string());
    os << text;
    if (!os) throw IOError("write failed for " + path.string());
}

}  // namespace esnoise::cli
