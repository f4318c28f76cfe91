#include "specb/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace specb {

namespace {

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

std::string tick_label(double v, bool log_scale) {
    std::ostringstream o;
    if (log_scale) {
        o << "1e" << static_cast<int>(std::lround(v));
    } else {
        o.precision(3);
        o << v;
    }
    return o.str();
}

}  // namespace

std::string SvgChart::render(int width, int height) const {
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = std::numeric_limits<double>::max(), ymax = -ymin;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            if (log_y && y <= 0.0) continue;
            double yy = log_y ? std::log10(y) : y;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy);
        }
    }
    if (!(xmin < xmax)) xmax = xmin + 1.0;
    if (!(ymin < ymax)) ymax = ymin + 1.0;
    const double xpad = 0.0, ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin + xpad) * pw; };
    auto py = [&](double y) {
        double yy = log_y ? std::log10(y) : y;
        return mt + (1.0 - (yy - ymin) / (ymax - ymin)) * ph;
    };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";

    // axes
    o << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
    o << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << mt + ph / 2
      << ")\">" << y_label << "</text>\n";

    // ticks
    const int n_ticks = 5;
    for (int t = 0; t <= n_ticks; ++t) {
        double fx = xmin + (xmax - xmin) * t / n_ticks;
        o << "<line x1=\"" << px(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(fx) << "\" y2=\""
          << mt + ph + 4 << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 18
          << "\" text-anchor=\"middle\" font-size=\"10\">" << tick_label(fx, false) << "</text>\n";
        double fy = ymin + (ymax - ymin) * t / n_ticks;
        double yy = mt + (1.0 - static_cast<double>(t) / n_ticks) * ph;
        o << "<line x1=\"" << ml - 4 << "\" y1=\"" << yy << "\" x2=\"" << ml << "\" y2=\"" << yy
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << ml - 8 << "\" y=\"" << yy + 3
          << "\" text-anchor=\"end\" font-size=\"10\">" << tick_label(fy, log_y) << "</text>\n";
    }

    for (double vx : v_lines) {
        o << "<line x1=\"" << px(vx) << "\" y1=\"" << mt << "\" x2=\"" << px(vx) << "\" y2=\""
          << mt + ph << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
        o << "<text x=\"" << px(vx) + 4 << "\" y=\"" << mt + 12 << "\" font-size=\"10\">k="
          << fmt(vx) << "</text>\n";
    }

    double ly = mt + 8;
    for (const auto& s : series) {
        std::ostringstream pts;
        for (auto [x, y] : s.points) {
            if (log_y && y <= 0.0) continue;
            pts << px(x) << "," << py(y) << " ";
        }
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\""
          << pts.str() << "\"/>\n";
        o << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 130
          << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << ml + pw - 125 << "\" y=\"" << ly + 3 << "\" font-size=\"10\">"
          << s.label << "</text>\n";
        ly += 14;
    }
    o << "</svg>\n";
    return o.str();
}

void SvgChart::write(const std::string& path, int width, int height) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("svg: cannot write '" + path + "'");
    f << render(width, height);
}

}  // namespace specb
