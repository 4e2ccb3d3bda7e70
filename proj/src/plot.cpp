#include "ruenergy/plot.hpp"

#include "ruenergy/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ruenergy::plot {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 170;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!std::isfinite(lo)) lo = 0, hi = 1;
        if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    }
};

double nice_step(double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

} // namespace

std::string render_svg(const Figure& fig) {
    const auto ty = [&](double v) { return fig.log_y ? (v > 0 ? std::log10(v) : std::nan("")) : v; };
    Range xr, yr;
    for (const auto& s : fig.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            const double y = ty(s.y[i]);
            if (std::isfinite(s.x[i]) && std::isfinite(y)) {
                xr.add(s.x[i]);
                yr.add(y);
            }
        }
    xr.pad();
    yr.pad();
    if (fig.equal_axes) {
        const double lim = std::max({std::abs(xr.lo), std::abs(xr.hi), std::abs(yr.lo), std::abs(yr.hi)});
        xr = {-lim, lim};
        yr = {-lim, lim};
    }
    if (fig.log_y) {
        yr.lo = std::floor(yr.lo);
        yr.hi = std::ceil(yr.hi);
        if (yr.hi == yr.lo) yr.hi += 1;
    }

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(fig.title) << "</text>\n";

    // Grid and ticks.
    const double xs = nice_step(xr.hi - xr.lo);
    for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + 1e-9 * xs; v += xs) {
        o << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(v)) << "\" y2=\""
          << num(kTop + ph) << "\" stroke=\"#e0e0e0\"/>\n";
        o << "<text x=\"" << num(px(v)) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\">"
          << tick_label(std::abs(v) < 1e-12 * xs ? 0.0 : v) << "</text>\n";
    }
    const double ys = fig.log_y ? 1.0 : nice_step(yr.hi - yr.lo);
    for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi + 1e-9 * ys; v += ys) {
        const double label = fig.log_y ? std::pow(10.0, v) : (std::abs(v) < 1e-12 * ys ? 0.0 : v);
        o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
          << num(py(v)) << "\" stroke=\"#e0e0e0\"/>\n";
        o << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
          << tick_label(label) << "</text>\n";
    }
    o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 18) << "\" text-anchor=\"middle\">"
      << escape(fig.x_label) << "</text>\n";
    o << "<text transform=\"translate(20," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(fig.y_label) << "</text>\n";

    for (std::size_t k = 0; k < fig.series.size(); ++k) {
        const auto& s = fig.series[k];
        const char* color = kColors[k % std::size(kColors)];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.scatter) {
            for (std::size_t i = 0; i < n; ++i) {
                const double y = ty(s.y[i]);
                if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
                o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(y)) << "\" r=\"1.5\" fill=\"" << color
                  << "\" fill-opacity=\"0.6\"/>\n";
            }
        } else {
            std::string path;
            bool pen = false;
            for (std::size_t i = 0; i < n; ++i) {
                const double y = ty(s.y[i]);
                if (!std::isfinite(s.x[i]) || !std::isfinite(y)) {
                    pen = false;
                    continue;
                }
                path += (pen ? " L" : " M") + num(px(s.x[i])) + " " + num(py(y));
                pen = true;
            }
            if (!path.empty())
                o << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
        }
        const double ly = kTop + 14 + 18 * static_cast<double>(k);
        o << "<rect x=\"" << num(kLeft + pw + 12) << "\" y=\"" << num(ly - 8) << "\" width=\"14\" height=\"4\" fill=\""
          << color << "\"/>\n";
        o << "<text x=\"" << num(kLeft + pw + 32) << "\" y=\"" << num(ly - 2) << "\">" << escape(s.name)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg(const Figure& fig, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out << render_svg(fig);
}

} // namespace ruenergy::plot
