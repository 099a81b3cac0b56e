#include "okm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace okm {

namespace {

constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 52.0;
constexpr double kPointRadius = 3.5;
constexpr double kRingRadius = 11.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    double step = 0.1;
};

// Rounds the data span out to 1/2/5 x 10^k steps, about five ticks.
Axis nice_axis(double lo, double hi) {
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

std::string tick_label(double v, double step) {
    const int decimals = std::max(0, -static_cast<int>(std::floor(std::log10(step) + 1e-9)));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, std::abs(v) < step * 1e-9 ? 0.0 : v);
    return buf;
}

} // namespace

void validate(const Dataset& ds, const PlotSpec& spec) {
    if (spec.x_variable == spec.y_variable) {
        throw Error("x and y variables must differ");
    }
    ds.column_index(spec.x_variable);
    ds.column_index(spec.y_variable);
    if (spec.width < 100 || spec.height < 100) {
        throw Error("plot must be at least 100 x 100 pixels");
    }
    if (!spec.highlight.empty() && spec.highlight.indices().back() >= ds.n()) {
        throw Error("highlighted row out of range");
    }
    if (spec.color_by && spec.color_by->size() != ds.n()) {
        throw Error("cluster assignment count " + std::to_string(spec.color_by->size()) +
                    " does not match row count " + std::to_string(ds.n()));
    }
}

std::string render_scatter_svg(const Dataset& ds, const PlotSpec& spec) {
    validate(ds, spec);
    const auto xs = ds.column(spec.x_variable);
    const auto ys = ds.column(spec.y_variable);
    const auto [xlo, xhi] = std::minmax_element(xs.begin(), xs.end());
    const auto [ylo, yhi] = std::minmax_element(ys.begin(), ys.end());
    const Axis ax = nice_axis(*xlo, *xhi);
    const Axis ay = nice_axis(*ylo, *yhi);

    const double w = spec.width;
    const double h = spec.height;
    const double left = kMarginLeft;
    const double right = w - kMarginRight;
    const double top = kMarginTop;
    const double bottom = h - kMarginBottom;
    auto px = [&](double v) { return left + (v - ax.lo) / (ax.hi - ax.lo) * (right - left); };
    auto py = [&](double v) { return bottom - (v - ay.lo) / (ay.hi - ay.lo) * (bottom - top); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"#ffffff\"/>\n";

    const std::string title =
        spec.title.empty() ? spec.y_variable + " vs " + spec.x_variable : spec.title;
    svg << "<text x=\"" << num(w / 2) << "\" y=\"22.00\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << escape(title) << "</text>\n";

    svg << "<g class=\"axes\" stroke=\"#333333\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(right) << "\" y2=\""
        << num(bottom) << "\"/>\n";
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(left) << "\" y2=\""
        << num(top) << "\"/>\n";
    const auto xticks = static_cast<int>(std::lround((ax.hi - ax.lo) / ax.step));
    for (int t = 0; t <= xticks; ++t) {
        const double v = ax.lo + t * ax.step;
        const double x = px(v);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(x) << "\" y2=\""
            << num(bottom + 5) << "\"/>\n";
        svg << "<text x=\"" << num(x) << "\" y=\"" << num(bottom + 18) << "\" text-anchor=\"middle\" stroke=\"none\">"
            << tick_label(v, ax.step) << "</text>\n";
    }
    const auto yticks = static_cast<int>(std::lround((ay.hi - ay.lo) / ay.step));
    for (int t = 0; t <= yticks; ++t) {
        const double v = ay.lo + t * ay.step;
        const double y = py(v);
        svg << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left) << "\" y2=\""
            << num(y) << "\"/>\n";
        svg << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\" stroke=\"none\">"
            << tick_label(v, ay.step) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text class=\"x-label\" x=\"" << num((left + right) / 2) << "\" y=\"" << num(h - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(spec.x_variable)
        << "</text>\n";
    svg << "<text class=\"y-label\" x=\"16.00\" y=\"" << num((top + bottom) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16.00 "
        << num((top + bottom) / 2) << ")\">" << escape(spec.y_variable) << "</text>\n";

    svg << "<g class=\"points\" stroke=\"#222222\" stroke-width=\"0.5\">\n";
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const bool hl = spec.highlight.contains(i);
        std::string_view fill = kPointColor;
        std::string cls = "point";
        if (spec.color_by) {
            const auto c = (*spec.color_by)[i];
            fill = kClusterPalette[c % kClusterPalette.size()];
            cls += " cluster-" + std::to_string(c);
        }
        if (hl) {
            fill = kHighlightColor;
            cls += " highlighted";
        }
        svg << "<circle class=\"" << cls << "\" data-row=\"" << i << "\" cx=\"" << num(px(xs[i])) << "\" cy=\""
            << num(py(ys[i])) << "\" r=\"" << num(hl ? kPointRadius + 1.5 : kPointRadius) << "\" fill=\"" << fill
            << "\"/>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"annotations\" fill=\"none\" stroke=\"" << kHighlightColor << "\" stroke-width=\"2\">\n";
    for (auto i : spec.highlight.indices()) {
        svg << "<circle class=\"annotation\" data-row=\"" << i << "\" cx=\"" << num(px(xs[i])) << "\" cy=\""
            << num(py(ys[i])) << "\" r=\"" << num(kRingRadius) << "\"/>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace okm
