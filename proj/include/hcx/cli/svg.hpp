#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hcx/error.hpp"

namespace hcx {

struct Series {
    std::string name;
    std::vector<double> x, y;
};

struct SvgPlot {
    std::string svg;
    std::vector<std::string> warnings;  ///< one line per dropped non-positive point
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
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

}  // namespace detail

/// Log-log line plot; output depends only on the input.
inline SvgPlot render_svg_loglog(const std::vector<Series>& series, const std::string& title = "",
                                 const std::string& xlabel = "x", const std::string& ylabel = "y") {
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    constexpr double width = 640, height = 440, left = 80, right = 170, top = 40, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;

    SvgPlot out;
    std::vector<std::vector<std::pair<double, double>>> pts(series.size());
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (std::size_t s = 0; s < series.size(); ++s) {
        require(series[s].x.size() == series[s].y.size(), ErrorCode::DimensionMismatch, "series x/y lengths differ");
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            const double x = series[s].x[i], y = series[s].y[i];
            if (!(x > 0.0 && y > 0.0 && std::isfinite(x) && std::isfinite(y))) {
                out.warnings.push_back("series '" + series[s].name + "': dropped point " + std::to_string(i) +
                                       " (non-positive or non-finite)");
                continue;
            }
            pts[s].emplace_back(std::log10(x), std::log10(y));
            x0 = std::min(x0, std::log10(x));
            x1 = std::max(x1, std::log10(x));
            y0 = std::min(y0, std::log10(y));
            y1 = std::max(y1, std::log10(y));
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    x0 = std::floor(x0), x1 = std::max(std::ceil(x1), x0 + 1);
    y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1);
    const auto px = [&](double lx) { return left + (lx - x0) / (x1 - x0) * pw; };
    const auto py = [&](double ly) { return top + (y1 - ly) / (y1 - y0) * ph; };

    std::string& s = out.svg;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"440\" viewBox=\"0 0 640 440\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"640\" height=\"440\" fill=\"white\"/>\n";
    if (!title.empty())
        s += "<text x=\"" + detail::fmt("%.1f", left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
             detail::xml_escape(title) + "</text>\n";

    const auto step = [](double span) { return std::max(1.0, std::ceil(span / 10.0)); };
    for (double d = x0; d <= x1 + 1e-9; d += step(x1 - x0)) {
        const std::string xs = detail::fmt("%.1f", px(d));
        s += "<line x1=\"" + xs + "\" y1=\"" + detail::fmt("%.1f", top) + "\" x2=\"" + xs + "\" y2=\"" +
             detail::fmt("%.1f", top + ph) + "\" stroke=\"#ddd\"/>\n";
        s += "<text x=\"" + xs + "\" y=\"" + detail::fmt("%.1f", top + ph + 18) + "\" text-anchor=\"middle\">1e" +
             detail::fmt("%.0f", d) + "</text>\n";
    }
    for (double d = y0; d <= y1 + 1e-9; d += step(y1 - y0)) {
        const std::string ys = detail::fmt("%.1f", py(d));
        s += "<line x1=\"" + detail::fmt("%.1f", left) + "\" y1=\"" + ys + "\" x2=\"" + detail::fmt("%.1f", left + pw) +
             "\" y2=\"" + ys + "\" stroke=\"#ddd\"/>\n";
        s += "<text x=\"" + detail::fmt("%.1f", left - 6) + "\" y=\"" + ys + "\" text-anchor=\"end\" dy=\"4\">1e" +
             detail::fmt("%.0f", d) + "</text>\n";
    }
    s += "<rect x=\"" + detail::fmt("%.1f", left) + "\" y=\"" + detail::fmt("%.1f", top) + "\" width=\"" +
         detail::fmt("%.1f", pw) + "\" height=\"" + detail::fmt("%.1f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<text x=\"" + detail::fmt("%.1f", left + pw / 2) + "\" y=\"" + detail::fmt("%.1f", height - 18) +
         "\" text-anchor=\"middle\">" + detail::xml_escape(xlabel) + "</text>\n";
    s += "<text x=\"20\" y=\"" + detail::fmt("%.1f", top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         detail::fmt("%.1f", top + ph / 2) + ")\">" + detail::xml_escape(ylabel) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = palette[k % (sizeof palette / sizeof *palette)];
        if (!pts[k].empty()) {
            s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < pts[k].size(); ++i) {
                if (i) s += ' ';
                s += detail::fmt("%.2f", px(pts[k][i].first)) + "," + detail::fmt("%.2f", py(pts[k][i].second));
            }
            s += "\"/>\n";
            for (const auto& [lx, ly] : pts[k])
                s += "<circle cx=\"" + detail::fmt("%.2f", px(lx)) + "\" cy=\"" + detail::fmt("%.2f", py(ly)) +
                     "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        }
        const double ly = top + 10 + 20 * static_cast<double>(k);
        const double lx = left + pw + 15;
        s += "<line x1=\"" + detail::fmt("%.1f", lx) + "\" y1=\"" + detail::fmt("%.1f", ly) + "\" x2=\"" +
             detail::fmt("%.1f", lx + 24) + "\" y2=\"" + detail::fmt("%.1f", ly) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + detail::fmt("%.1f", lx + 30) + "\" y=\"" + detail::fmt("%.1f", ly + 4) + "\">" +
             detail::xml_escape(series[k].name) + "</text>\n";
    }
    s += "</svg>\n";
    return out;
}

inline std::vector<std::string> emit_svg_loglog(const std::vector<Series>& series, const std::string& path,
                                                const std::string& title = "", const std::string& xlabel = "x",
                                                const std::string& ylabel = "y") {
    SvgPlot plot = render_svg_loglog(series, title, xlabel, ylabel);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << plot.svg;
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
    return plot.warnings;
}

}  // namespace hcx
