#pragma once

#include <string>
#include <vector>

namespace specb {

/// Minimal static SVG line chart; no display server involved.
struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

struct SvgChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<SvgSeries> series;
    std::vector<double> v_lines;  // dotted vertical markers (e.g. truncation frequency)

    std::string render(int width = 720, int height = 480) const;
    void write(const std::string& path, int width = 720, int height = 480) const;
};

}  // namespace specb
