#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace cgkit {

// Minimal hand-emitted SVG 1.1 line plot, log-scaled on both axes,
// 800x600 viewBox, no timestamps: output is a pure function of the data.
struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x, y;
};

inline void write_svg_plot(std::ostream& os, const std::string& title,
                           const std::string& x_label, const std::string& y_label,
                           const std::vector<SvgSeries>& series) {
    const double width = 800, height = 600;
    const double ml = 80, mr = 30, mt = 50, mb = 60;
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool first = true;
    for (const auto& s : series) {
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (s.x[i] <= 0.0 || s.y[i] <= 0.0) continue;
            double lx = std::log10(s.x[i]), ly = std::log10(s.y[i]);
            if (first) {
                x_lo = x_hi = lx;
                y_lo = y_hi = ly;
                first = false;
            } else {
                x_lo = std::min(x_lo, lx);
                x_hi = std::max(x_hi, lx);
                y_lo = std::min(y_lo, ly);
                y_hi = std::max(y_hi, ly);
            }
        }
    }
    if (first) {
        x_lo = y_lo = 0;
        x_hi = y_hi = 1;
    }
    if (x_hi - x_lo < 1e-12) x_hi = x_lo + 1;
    if (y_hi - y_lo < 1e-12) y_hi = y_lo + 1;

    auto px = [&](double lx) { return ml + (lx - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
    auto py = [&](double ly) {
        return height - mb - (ly - y_lo) / (y_hi - y_lo) * (height - mt - mb);
    };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
          "viewBox=\"0 0 800 600\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    os << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">" << title
       << "</text>\n";
    os << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(height - mb) << "\" x2=\""
       << fmt(width - mr) << "\" y2=\"" << fmt(height - mb)
       << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(ml)
       << "\" y2=\"" << fmt(height - mb) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // Decade ticks.
    for (int e = static_cast<int>(std::ceil(x_lo)); e <= static_cast<int>(std::floor(x_hi));
         ++e) {
        double x = px(e);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(height - mb) << "\" x2=\""
           << fmt(x) << "\" y2=\"" << fmt(height - mb + 6)
           << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(height - mb + 22)
           << "\" text-anchor=\"middle\" font-size=\"12\">1e" << e << "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(y_lo)); e <= static_cast<int>(std::floor(y_hi));
         ++e) {
        double y = py(e);
        os << "<line x1=\"" << fmt(ml - 6) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(ml)
           << "\" y2=\"" << fmt(y) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << fmt(ml - 10) << "\" y=\"" << fmt(y + 4)
           << "\" text-anchor=\"end\" font-size=\"12\">1e" << e << "</text>\n";
    }
    os << "<text x=\"" << fmt((ml + width - mr) / 2) << "\" y=\"" << fmt(height - 15)
       << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
    os << "<text x=\"20\" y=\"" << fmt((mt + height - mb) / 2)
       << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
       << fmt((mt + height - mb) / 2) << ")\">" << y_label << "</text>\n";

    int legend_row = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color
           << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (s.x[i] <= 0.0 || s.y[i] <= 0.0) continue;
            os << fmt(px(std::log10(s.x[i]))) << ',' << fmt(py(std::log10(s.y[i]))) << ' ';
        }
        os << "\"/>\n";
        double ly = mt + 10 + 18 * legend_row++;
        os << "<line x1=\"" << fmt(width - mr - 150) << "\" y1=\"" << fmt(ly) << "\" x2=\""
           << fmt(width - mr - 120) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << fmt(width - mr - 114) << "\" y=\"" << fmt(ly + 4)
           << "\" font-size=\"12\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace cgkit
