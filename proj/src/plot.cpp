#include "pfkrylov/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "pfkrylov/errors.hpp"

namespace pfk {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel,
                         const std::vector<PlotSeries>& series, bool log_y) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    double ypos_min = xmin;  // smallest positive y, for the log floor
    for (const PlotSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
            if (s.y[i] > 0.0) ypos_min = std::min(ypos_min, s.y[i]);
        }
    }
    if (!std::isfinite(xmin) || !std::isfinite(ymin)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    auto ytrans = [&](double v) {
        if (!log_y) return v;
        const double floor = std::isfinite(ypos_min) ? ypos_min : 1e-300;
        return std::log10(std::max(v, floor));
    };
    double tymin = ytrans(log_y ? (std::isfinite(ypos_min) ? ypos_min : 1.0) : ymin);
    double tymax = ytrans(ymax);
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (tymax <= tymin) tymax = tymin + 1.0;

    const double pw = kWidth - kMarginLeft - kMarginRight;
    const double ph = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) {
        return kMarginTop + ph - (ytrans(y) - tymin) / (tymax - tymin) * ph;
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // Axes and ticks.
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int nticks = 5;
    for (int i = 0; i <= nticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / nticks;
        const double xpix = px(fx);
        out << "<line x1=\"" << xpix << "\" y1=\"" << kMarginTop + ph << "\" x2=\"" << xpix
            << "\" y2=\"" << kMarginTop + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << xpix << "\" y=\"" << kMarginTop + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(fx) << "</text>\n";
        const double ty = tymin + (tymax - tymin) * i / nticks;
        const double yval = log_y ? std::pow(10.0, ty) : ty;
        const double ypix = kMarginTop + ph - (ty - tymin) / (tymax - tymin) * ph;
        out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << ypix << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << ypix << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << ypix + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(yval)
            << "</text>\n";
    }
    out << "<text x=\"" << kMarginLeft + pw / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << kMarginTop + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << kMarginTop + ph / 2 << ")\">" << ylabel
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
            if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i])) continue;
            out << px(series[s].x[i]) << "," << py(series[s].y[i]) << " ";
        }
        out << "\"/>\n";
        out << "<text x=\"" << kMarginLeft + pw - 8 << "\" y=\"" << kMarginTop + 16 + 16 * s
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << color << "\">" << series[s].name << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace pfk
