#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ionchain::cli {

namespace {

const char* kPalette[] = {"#1f6fb4", "#d0442c", "#2c8f4e", "#8a4fb8", "#b8860b", "#3a3a3a"};

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

void write_svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& options,
                    const std::filesystem::path& path) {
    if (series.empty())
        throw std::invalid_argument("write_svg_plot: no series");
    for (const auto& s : series)
        if (s.points.empty())
            throw std::invalid_argument("write_svg_plot: empty series '" + s.label + "'");

    auto tx = [&](double v) {
        if (!options.log_x)
            return v;
        if (!(v > 0.0))
            throw std::invalid_argument("write_svg_plot: non-positive x on a log axis");
        return std::log10(v);
    };
    auto ty = [&](double v) {
        if (!options.log_y)
            return v;
        if (!(v > 0.0))
            throw std::invalid_argument("write_svg_plot: non-positive y on a log axis");
        return std::log10(v);
    };

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            x_lo = std::min(x_lo, tx(x));
            x_hi = std::max(x_hi, tx(x));
            y_lo = std::min(y_lo, ty(y));
            y_hi = std::max(y_hi, ty(y));
        }
    if (x_hi <= x_lo) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (y_hi <= y_lo) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }

    const double ml = 72, mr = 20, mt = 20, mb = 52;
    const double pw = options.width - ml - mr;
    const double ph = options.height - mt - mb;
    auto px = [&](double v) { return ml + pw * (tx(v) - x_lo) / (x_hi - x_lo); };
    auto py = [&](double v) { return mt + ph * (1.0 - (ty(v) - y_lo) / (y_hi - y_lo)); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
           "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " +
           std::to_string(options.width) + " " + std::to_string(options.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(ml + pw) +
           "\" y2=\"" + fmt(mt + ph) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
           fmt(mt + ph) + "\" stroke=\"black\"/>\n";

    // ticks: 5 per axis, evenly spaced in the (possibly log) plot coordinate
    for (int t = 0; t <= 4; ++t) {
        const double fx = x_lo + (x_hi - x_lo) * t / 4.0;
        const double vx = options.log_x ? std::pow(10.0, fx) : fx;
        const double cx = ml + pw * t / 4.0;
        svg += "<line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(cx) +
               "\" y2=\"" + fmt(mt + ph + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(cx) + "\" y=\"" + fmt(mt + ph + 18) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + fmt(vx, "%.4g") + "</text>\n";

        const double fy = y_lo + (y_hi - y_lo) * t / 4.0;
        const double vy = options.log_y ? std::pow(10.0, fy) : fy;
        const double cy = mt + ph * (1.0 - t / 4.0);
        svg += "<line x1=\"" + fmt(ml - 5) + "\" y1=\"" + fmt(cy) + "\" x2=\"" + fmt(ml) +
               "\" y2=\"" + fmt(cy) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(cy + 4) +
               "\" font-size=\"11\" text-anchor=\"end\">" + fmt(vy, "%.4g") + "</text>\n";
    }
    svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(mt + ph + 38) +
           "\" font-size=\"13\" text-anchor=\"middle\">" + escape_xml(options.x_label) +
           "</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt(mt + ph / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fmt(mt + ph / 2) + ")\">" + escape_xml(options.y_label) + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string pts;
        for (const auto& [x, y] : series[si].points) {
            if (!pts.empty())
                pts += ' ';
            pts += fmt(px(x)) + "," + fmt(py(y));
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    }

    // legend, top right
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const double ly = mt + 14 + 16 * static_cast<double>(si);
        svg += "<line x1=\"" + fmt(ml + pw - 130) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
               fmt(ml + pw - 108) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + fmt(ml + pw - 102) + "\" y=\"" + fmt(ly) + "\" font-size=\"11\">" +
               escape_xml(series[si].label) + "</text>\n";
    }
    svg += "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_svg_plot: cannot open " + path.string());
    out << svg;
    if (!out)
        throw std::runtime_error("write_svg_plot: write failed for " + path.string());
}

} // namespace ionchain::cli
