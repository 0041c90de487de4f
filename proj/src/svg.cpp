#include "vdyn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vdyn {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
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

std::string tick_label(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!std::isfinite(lo)) lo = hi = 0.0;
        if (hi == lo) {
            const double d = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
            lo -= d;
            hi += d;
        }
    }
};

void header(std::ostringstream& svg, const std::string& title) {
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title) << "</text>\n";
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<LineSeries>& series) {
    Range xr, yr;
    for (const auto& s : series) {
        for (double x : s.xs) xr.add(x);
        for (double y : s.ys) yr.add(y);
    }
    xr.pad();
    yr.pad();
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return kTop + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * plot_h; };

    std::ostringstream svg;
    header(svg, title);
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / kTicks;
        const double fy = yr.lo + (yr.hi - yr.lo) * i / kTicks;
        svg << "<text x=\"" << px(fx) << "\" y=\"" << kTop + plot_h + 16
            << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(fy) + 4 << "\" text-anchor=\"end\">"
            << tick_label(fy) << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << kTop + plot_h / 2 << ")\">" << escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            svg << px(s.xs[i]) << ',' << py(s.ys[i]) << ' ';
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << kLeft + 8 << "\" y=\"" << kTop + 16 + 14 * static_cast<double>(k)
            << "\" fill=\"" << colour << "\">" << escape(s.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string tornado_svg(const std::string& title, const std::vector<TornadoRow>& rows,
                        double threshold) {
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v + 1.0) / 2.0 * plot_w; };
    const double band = rows.empty() ? plot_h : plot_h / static_cast<double>(rows.size());

    std::ostringstream svg;
    header(svg, title);
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double y = kTop + band * static_cast<double>(i) + 0.2 * band;
        const double x0 = px(std::min(0.0, r.prcc));
        const double x1 = px(std::max(0.0, r.prcc));
        svg << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << x1 - x0 << "\" height=\""
            << 0.6 * band << "\" fill=\"" << (r.significant ? "#1f77b4" : "#9ecae1") << "\"/>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 0.3 * band + 4
            << "\" text-anchor=\"end\">" << escape(r.parameter) << "</text>\n";
    }
    for (double v : {-threshold, threshold}) {
        svg << "<line x1=\"" << px(v) << "\" y1=\"" << kTop << "\" x2=\"" << px(v) << "\" y2=\""
            << kTop + plot_h << "\" stroke=\"black\" stroke-dasharray=\"5,4\"/>\n";
    }
    svg << "<line x1=\"" << px(0.0) << "\" y1=\"" << kTop << "\" x2=\"" << px(0.0) << "\" y2=\""
        << kTop + plot_h << "\" stroke=\"gray\"/>\n";
    for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        svg << "<text x=\"" << px(v) << "\" y=\"" << kTop + plot_h + 16
            << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">PRCC</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace vdyn
