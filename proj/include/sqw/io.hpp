#pragma once

// CSV and SVG emitters for the command-line tools. CSV is the canonical
// output (comma separated, LF line endings, reals with 12 significant
// digits); SVG is presentation only.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace sqw::io {

inline std::string format_real(double x) {
    if (x == 0.0) return "0"; // also folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

struct Series {
    std::string label;
    std::vector<double> y;
};

namespace detail {

inline std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string hsl_color(std::size_t k, std::size_t n) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "hsl(%d,70%%,45%%)", static_cast<int>(360.0 * k / std::max<std::size_t>(n, 1)));
    return buf;
}

// Piecewise-linear dark-blue -> teal -> yellow ramp on [0, 1].
inline std::string ramp_color(double v) {
    v = std::clamp(v, 0.0, 1.0);
    const double stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
    const double s = v * 2.0;
    const int k = std::min(1, static_cast<int>(s));
    const double f = s - k;
    char buf[24];
    std::snprintf(buf, sizeof buf, "rgb(%d,%d,%d)", static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                  static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                  static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
    return buf;
}

} // namespace detail

/// Line chart of series over common x values; y axis fixed to [0, 1].
inline std::string line_chart_svg(const std::vector<double>& x, const std::vector<Series>& series, std::string_view title,
                                  std::string_view x_label, std::string_view y_label) {
    const double w = 820, h = 500, left = 70, right = 160, top = 40, bottom = 60;
    const double pw = w - left - right, ph = h - top - bottom;
    const double x0 = x.empty() ? 0.0 : x.front();
    const double x1 = x.empty() ? 1.0 : std::max(x.back(), x0 + 1e-12);
    auto sx = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
    auto sy = [&](double v) { return top + (1.0 - v) * ph; };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << detail::escape(title) << "</text>\n";
    s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double v = k / 5.0;
        s << "<text x=\"" << left - 8 << "\" y=\"" << sy(v) + 4 << "\" text-anchor=\"end\">" << format_real(v) << "</text>\n";
        const double xv = x0 + v * (x1 - x0);
        s << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << format_real(std::round(xv * 100) / 100) << "</text>\n";
    }
    s << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">" << detail::escape(x_label) << "</text>\n";
    s << "<text transform=\"translate(20," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << detail::escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto color = detail::hsl_color(k, series.size());
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t m = std::min(x.size(), series[k].y.size());
        for (std::size_t i = 0; i < m; ++i) s << sx(x[i]) << ',' << sy(series[k].y[i]) << ' ';
        s << "\"/>\n";
        const double ly = top + 10 + 18.0 * k;
        s << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << detail::escape(series[k].label) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

/// Heat map with one cell per (column, row). values[r][c]; negative values
/// are drawn grey.
inline std::string heat_map_svg(const std::vector<double>& col_values, const std::vector<double>& row_values,
                                const std::vector<std::vector<double>>& values, std::string_view title,
                                std::string_view col_label, std::string_view row_label) {
    const double cell = 70, left = 80, top = 50;
    const double w = left + cell * col_values.size() + 140, h = top + cell * row_values.size() + 70;
    double vmax = 0.0;
    for (const auto& r : values)
        for (double v : r) vmax = std::max(vmax, v);

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << left + cell * col_values.size() / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"15\">" << detail::escape(title) << "</text>\n";
    for (std::size_t r = 0; r < row_values.size(); ++r) {
        // first row at the bottom
        const double y = top + cell * (row_values.size() - 1 - r);
        s << "<text x=\"" << left - 8 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"end\">" << format_real(row_values[r]) << "</text>\n";
        for (std::size_t c = 0; c < col_values.size(); ++c) {
            const double v = values.at(r).at(c);
            const auto fill = v < 0.0 ? std::string("rgb(160,160,160)") : detail::ramp_color(vmax > 0 ? v / vmax : 0.0);
            const double x = left + cell * c;
            s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << fill
              << "\" stroke=\"white\"/>\n";
            s << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\" fill=\""
              << (vmax > 0 && v / vmax > 0.6 ? "black" : "white") << "\">" << format_real(std::round(v * 100) / 100) << "</text>\n";
        }
    }
    const double axis_y = top + cell * row_values.size();
    for (std::size_t c = 0; c < col_values.size(); ++c) {
        s << "<text x=\"" << left + cell * c + cell / 2 << "\" y=\"" << axis_y + 18 << "\" text-anchor=\"middle\">" << format_real(col_values[c]) << "</text>\n";
    }
    s << "<text x=\"" << left + cell * col_values.size() / 2 << "\" y=\"" << axis_y + 45 << "\" text-anchor=\"middle\">" << detail::escape(col_label) << "</text>\n";
    s << "<text transform=\"translate(22," << top + cell * row_values.size() / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << detail::escape(row_label) << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

} // namespace sqw::io
