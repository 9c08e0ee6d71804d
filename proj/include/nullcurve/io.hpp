#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace nullcurve::io {

/// Locale-independent decimal formatting with 17 significant digits.
inline std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

struct CsvWriter {
    std::ofstream out;

    CsvWriter(const std::string& path, const std::vector<std::string>& columns) : out(path) {
        if (!out) throw std::runtime_error("cannot open " + path);
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << columns[i];
        out << "\n";
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out << (i ? "," : "") << format_double(values[i]);
        out << "\n";
    }

    void row_tagged(const std::vector<double>& values, const std::string& tag) {
        for (const double v : values) out << format_double(v) << ",";
        out << tag << "\n";
    }
};

// ---------------------------------------------------------------------------
// Minimal self-contained SVG line plots

struct Series {
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    std::string label;
    bool points_only = false;
};

inline void write_svg_plot(const std::string& path, const std::vector<Series>& series,
                           const std::string& title, const std::string& xlabel,
                           const std::string& ylabel) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmin > xmax) {
        xmin = ymin = 0;
        xmax = ymax = 1;
    }
    const double padx = 0.05 * (xmax - xmin + 1e-12), pady = 0.05 * (ymax - ymin + 1e-12);
    xmin -= padx;
    xmax += padx;
    ymin -= pady;
    ymax += pady;

    const int W = 720, H = 540, ML = 60, MR = 20, MT = 40, MB = 50;
    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<style>text{font-family:sans-serif;font-size:12px}.t{font-size:14px}</style>\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                  "stroke=\"#888\"/>\n",
                  ML, MT, W - ML - MR, H - MT - MB);
    out << buf;
    out << "<text class=\"t\" x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
        << "</text>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xlabel
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << H / 2 << ")\">" << ylabel << "</text>\n";

    // axis ticks
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4;
        const double yv = ymin + (ymax - ymin) * i / 4;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\">%.3g</text>\n", px(xv),
                      H - MB + 16, xv);
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\">%.3g</text>\n", ML - 6,
                      py(yv) + 4, yv);
        out << buf;
    }

    int legend_y = MT + 16;
    for (const auto& s : series) {
        if (s.points_only) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                std::snprintf(buf, sizeof buf,
                              "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.6\" fill=\"%s\"/>\n",
                              px(s.x[i]), py(s.y[i]), s.color.c_str());
                out << buf;
            }
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.4\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
                out << buf;
            }
            out << "\"/>\n";
        }
        if (!s.label.empty()) {
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%d\" y=\"%d\" width=\"12\" height=\"4\" fill=\"%s\"/>"
                          "<text x=\"%d\" y=\"%d\">%s</text>\n",
                          W - MR - 170, legend_y - 4, s.color.c_str(), W - MR - 152, legend_y,
                          s.label.c_str());
            out << buf;
            legend_y += 18;
        }
    }
    out << "</svg>\n";
}

}  // namespace nullcurve::io
