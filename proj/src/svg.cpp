#include "crl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace crl {

namespace {

constexpr int kPlotSize = 420;
constexpr int kMargin = 60;

// fixed 6-color cycle, repeated when series outnumber it
const char* kPalette[] = {"#1f6fb2", "#d9541e", "#2e8b57", "#8a2be2", "#b8860b", "#c71585"};

std::string fmt(double v, int precision = 4) {
    std::ostringstream out;
    out.precision(precision);
    out << std::fixed << v;
    return out.str();
}

std::string color_for(double r) {
    // blue at -1, white at 0, red at +1; NaN renders gray
    if (std::isnan(r)) return "#bbbbbb";
    r = std::clamp(r, -1.0, 1.0);
    int red = 255, green = 255, blue = 255;
    if (r >= 0.0) {
        green = static_cast<int>(std::lround(255.0 * (1.0 - r)));
        blue = green;
    } else {
        red = static_cast<int>(std::lround(255.0 * (1.0 + r)));
        green = red;
    }
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", red, green, blue);
    return buffer;
}

} // namespace

std::string roc_svg(const std::vector<RocSeries>& series) {
    const int width = kPlotSize + 2 * kMargin + 180; // room for the legend
    const int height = kPlotSize + 2 * kMargin;
    const auto x_px = [](double x) { return kMargin + x * kPlotSize; };
    const auto y_px = [&](double y) { return kMargin + (1.0 - y) * kPlotSize; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // frame and gridlines every 0.25
    for (int i = 0; i <= 4; ++i) {
        const double t = i / 4.0;
        out << "<line x1=\"" << x_px(t) << "\" y1=\"" << y_px(0) << "\" x2=\"" << x_px(t)
            << "\" y2=\"" << y_px(1) << "\" stroke=\"#dddddd\"/>\n";
        out << "<line x1=\"" << x_px(0) << "\" y1=\"" << y_px(t) << "\" x2=\"" << x_px(1)
            << "\" y2=\"" << y_px(t) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << x_px(t) << "\" y=\"" << y_px(0) + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(t, 2) << "</text>\n";
        out << "<text x=\"" << x_px(0) - 8 << "\" y=\"" << y_px(t) + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(t, 2) << "</text>\n";
    }
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlotSize
        << "\" height=\"" << kPlotSize << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    out << "<line x1=\"" << x_px(0) << "\" y1=\"" << y_px(0) << "\" x2=\"" << x_px(1)
        << "\" y2=\"" << y_px(1) << "\" stroke=\"#999999\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << kMargin + kPlotSize / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"14\" text-anchor=\"middle\">false positive rate</text>\n";
    out << "<text x=\"18\" y=\"" << kMargin + kPlotSize / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kMargin + kPlotSize / 2 << ")\">true positive rate</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& curve = series[s];
        const char* color = kPalette[s % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
            out << fmt(x_px(curve.fpr[i]), 2) << ',' << fmt(y_px(curve.tpr[i]), 2) << ' ';
        }
        out << "\"/>\n";
        const int ly = kMargin + 16 + static_cast<int>(s) * 20;
        const int lx = kPlotSize + 2 * kMargin + 10;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << lx + 30 << "\" y=\"" << ly << "\" font-size=\"13\">" << curve.label
            << " (auc " << fmt(curve.auc) << ")</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string correlation_heatmap_svg(const std::vector<std::string>& names,
                                    const std::vector<std::vector<double>>& matrix) {
    const std::size_t k = names.size();
    const int cell = 42;
    const int label_space = 170;
    const int width = label_space + static_cast<int>(k) * cell + 20;
    const int height = label_space + static_cast<int>(k) * cell + 20;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    for (std::size_t i = 0; i < k; ++i) {
        const int y = label_space + static_cast<int>(i) * cell;
        out << "<text x=\"" << label_space - 6 << "\" y=\"" << y + cell / 2 + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << names[i] << "</text>\n";
        const int x = label_space + static_cast<int>(i) * cell;
        out << "<text x=\"" << x + cell / 2 << "\" y=\"" << label_space - 6
            << "\" font-size=\"11\" text-anchor=\"start\" transform=\"rotate(-60 " << x + cell / 2
            << ' ' << label_space - 6 << ")\">" << names[i] << "</text>\n";
        for (std::size_t j = 0; j < k; ++j) {
            const double r = matrix[i][j];
            const int cx = label_space + static_cast<int>(j) * cell;
            out << "<rect x=\"" << cx << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
                << cell << "\" fill=\"" << color_for(r) << "\" stroke=\"#ffffff\"/>\n";
            out << "<text x=\"" << cx + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                << "\" font-size=\"9\" text-anchor=\"middle\">"
                << (std::isnan(r) ? std::string("n/a") : fmt(r, 2)) << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace crl
