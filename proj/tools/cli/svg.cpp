#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "format.hpp"

namespace ptscatter::cli {

namespace {

std::string num(double x) { return format_fixed(x, 2); }

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
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

double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0;
    return nice * mag;
}

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

}  // namespace

SvgDocument::SvgDocument(double width, double height) : width_(width), height_(height) {}

void SvgDocument::rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

void SvgDocument::line(double x1, double y1, double x2, double y2, const std::string& stroke, double width,
                       bool dashed) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"";
    if (dashed) {
        body_ += " stroke-dasharray=\"6,4\"";
    }
    body_ += "/>\n";
}

void SvgDocument::polyline(std::span<const double> xs, std::span<const double> ys, const std::string& stroke,
                           double width) {
    std::string points;
    int count = 0;
    auto flush = [&] {
        if (count >= 2) {
            body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
                     "\" points=\"" + points + "\"/>\n";
        }
        points.clear();
        count = 0;
    };
    const std::size_t n = std::min(xs.size(), ys.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            flush();
            continue;
        }
        if (count > 0) {
            points += ' ';
        }
        points += num(xs[i]) + ',' + num(ys[i]);
        ++count;
    }
    flush();
}

void SvgDocument::text(double x, double y, const std::string& content, double size, const std::string& anchor,
                       double rotate) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) + "\" text-anchor=\"" +
             anchor + "\"";
    if (rotate != 0.0) {
        body_ += " transform=\"rotate(" + num(rotate) + " " + num(x) + " " + num(y) + ")\"";
    }
    body_ += ">" + escape(content) + "</text>\n";
}

void SvgDocument::begin_group(const std::string& attributes) { body_ += "<g " + attributes + ">\n"; }

void SvgDocument::end_group() { body_ += "</g>\n"; }

std::string SvgDocument::str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
           "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\" font-family=\"sans-serif\">\n" +
           "<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" + num(height_) + "\" fill=\"white\"/>\n" +
           body_ + "</svg>\n";
}

Axes::Axes(double left, double top, double width, double height, AxisRange x, AxisRange y)
    : left_(left), top_(top), width_(width), height_(height), x_(x), y_(y) {}

double Axes::px(double x) const { return left_ + (x - x_.lo) / (x_.hi - x_.lo) * width_; }

double Axes::py(double y) const { return top_ + height_ - (y - y_.lo) / (y_.hi - y_.lo) * height_; }

void Axes::draw(SvgDocument& doc, const std::string& x_label, const std::string& y_label) const {
    doc.rect(left_, top_, width_, height_, "none", "black");
    const double xs = nice_step(x_.hi - x_.lo, 6);
    for (double t = std::ceil(x_.lo / xs) * xs; t <= x_.hi + 1e-9 * xs; t += xs) {
        const double x = px(t);
        doc.line(x, top_ + height_, x, top_ + height_ + 5, "black");
        doc.text(x, top_ + height_ + 18, format_short(std::abs(t) < 1e-12 * xs ? 0.0 : t), 11);
    }
    const double ys = nice_step(y_.hi - y_.lo, 5);
    for (double t = std::ceil(y_.lo / ys) * ys; t <= y_.hi + 1e-9 * ys; t += ys) {
        const double y = py(t);
        doc.line(left_ - 5, y, left_, y, "black");
        doc.text(left_ - 8, y + 4, format_short(std::abs(t) < 1e-12 * ys ? 0.0 : t), 11, "end");
    }
    doc.text(left_ + 0.5 * width_, top_ + height_ + 38, x_label, 13);
    doc.text(left_ - 52, top_ + 0.5 * height_, y_label, 13, "middle", -90);
}

AxisRange data_range(std::span<const double> values) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const double v : values) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo)) {
        return {0.0, 1.0};
    }
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
        const double pad = std::max(0.5, 0.1 * std::abs(hi));
        return {lo - pad, hi + pad};
    }
    const double pad = 0.04 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::string ramp_colour(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops = {{
        {68, 1, 84},
        {59, 82, 139},
        {33, 145, 140},
        {94, 201, 98},
        {253, 231, 37},
    }};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const double s = t * (stops.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), stops.size() - 2);
    const double f = s - static_cast<double>(i);
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) {
        rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
    }
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string heatmap_svg(const std::string& title, std::span<const double> xs, std::span<const double> ys,
                        std::span<const double> values, const std::string& x_label, const std::string& y_label,
                        const std::string& value_label) {
    constexpr double kW = 760, kH = 520;
    SvgDocument doc(kW, kH);
    doc.text(kW / 2, 24, title, 15);

    std::vector<double> logs(values.size());
    std::transform(values.begin(), values.end(), logs.begin(), [](double v) {
        return v > 0.0 && std::isfinite(v) ? std::log10(v) : std::numeric_limits<double>::quiet_NaN();
    });
    AxisRange lr = data_range(logs);

    // Cell edges halfway between samples.
    auto edges = [](std::span<const double> c) {
        std::vector<double> e(c.size() + 1);
        for (std::size_t i = 1; i < c.size(); ++i) e[i] = 0.5 * (c[i - 1] + c[i]);
        e.front() = c.size() > 1 ? c[0] - (e[1] - c[0]) : c[0] - 0.5;
        e.back() = c.size() > 1 ? c.back() + (c.back() - e[c.size() - 1]) : c[0] + 0.5;
        return e;
    };
    const auto xe = edges(xs);
    const auto ye = edges(ys);
    const Axes ax(80, 40, 560, 420, {xe.front(), xe.back()}, {ye.front(), ye.back()});

    doc.begin_group("shape-rendering=\"crispEdges\"");
    for (std::size_t i = 0; i < ys.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double l = logs[i * xs.size() + j];
            const std::string fill = std::isnan(l) ? "#bdbdbd" : ramp_colour((l - lr.lo) / (lr.hi - lr.lo));
            const double x0 = ax.px(xe[j]);
            const double y0 = ax.py(ye[i + 1]);
            // Slight overlap avoids hairline gaps between cells in viewers.
            doc.rect(x0, y0, ax.px(xe[j + 1]) - x0 + 0.3, ax.py(ye[i]) - y0 + 0.3, fill);
        }
    }
    doc.end_group();
    ax.draw(doc, x_label, y_label);

    // Colour bar.
    const Axes bar(680, 40, 18, 420, {0.0, 1.0}, lr);
    constexpr int kSteps = 64;
    for (int s = 0; s < kSteps; ++s) {
        const double y1 = bar.top() + bar.height() * (1.0 - static_cast<double>(s + 1) / kSteps);
        doc.rect(bar.left(), y1, bar.width(), bar.height() / kSteps + 0.3, ramp_colour((s + 0.5) / kSteps));
    }
    doc.rect(bar.left(), bar.top(), bar.width(), bar.height(), "none", "black");
    const double ls = nice_step(lr.hi - lr.lo, 5);
    for (double t = std::ceil(lr.lo / ls) * ls; t <= lr.hi + 1e-9 * ls; t += ls) {
        doc.line(bar.left() + bar.width(), bar.py(t), bar.left() + bar.width() + 4, bar.py(t), "black");
        doc.text(bar.left() + bar.width() + 7, bar.py(t) + 4, format_short(std::abs(t) < 1e-12 * ls ? 0.0 : t), 11,
                 "start");
    }
    doc.text(bar.left() + 9, bar.top() - 10, "log10 " + value_label, 11);
    return doc.str();
}

std::string line_plot_svg(const std::string& title, std::span<const LineSeries> series, const std::string& x_label,
                          const std::string& y_label, std::span<const double> vertical_markers) {
    constexpr double kW = 760, kH = 480;
    SvgDocument doc(kW, kH);
    doc.text(kW / 2, 24, title, 15);

    std::vector<double> all_x, all_y;
    for (const auto& s : series) {
        all_x.insert(all_x.end(), s.x.begin(), s.x.end());
        all_y.insert(all_y.end(), s.y.begin(), s.y.end());
    }
    AxisRange xr = data_range(all_x);
    if (!all_x.empty()) {
        const auto [mn, mx] = std::minmax_element(all_x.begin(), all_x.end());
        if (*mx > *mn) xr = {*mn, *mx};
    }
    const Axes ax(80, 40, 540, 380, xr, data_range(all_y));

    for (const double m : vertical_markers) {
        if (m >= xr.lo && m <= xr.hi) {
            doc.line(ax.px(m), ax.top(), ax.px(m), ax.top() + ax.height(), "#888888", 1.0, true);
        }
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        std::vector<double> px(s.x.size()), py(s.y.size());
        std::transform(s.x.begin(), s.x.end(), px.begin(), [&](double v) { return ax.px(v); });
        std::transform(s.y.begin(), s.y.end(), py.begin(), [&](double v) { return ax.py(v); });
        const std::string colour = kPalette[k % kPalette.size()];
        doc.polyline(px, py, colour);
        const double ly = 50 + 18 * static_cast<double>(k);
        doc.line(635, ly, 660, ly, colour, 2.0);
        doc.text(666, ly + 4, s.label, 11, "start");
    }
    ax.draw(doc, x_label, y_label);
    return doc.str();
}

std::string timing_overlay_svg(const std::string& title, std::span<const double> ka,
                               std::span<const double> delay_ratio, std::span<const double> t2,
                               std::span<const double> peak_positions) {
    constexpr double kW = 760, kH = 640;
    SvgDocument doc(kW, kH);
    doc.text(kW / 2, 24, title, 15);

    AxisRange xr = data_range(ka);
    if (ka.size() > 1) xr = {ka.front(), ka.back()};
    std::vector<double> dr(delay_ratio.begin(), delay_ratio.end());
    dr.push_back(-1.0);  // keep the asymptote visible
    const Axes top(80, 40, 620, 250, xr, data_range(dr));
    const Axes bottom(80, 350, 620, 230, xr, data_range(t2));

    for (const Axes* ax : {&top, &bottom}) {
        for (const double m : peak_positions) {
            if (m >= xr.lo && m <= xr.hi) {
                doc.line(ax->px(m), ax->top(), ax->px(m), ax->top() + ax->height(), "#888888", 1.0, true);
            }
        }
    }
    doc.line(top.left(), top.py(-1.0), top.left() + top.width(), top.py(-1.0), "#d62728", 1.0, true);

    auto draw = [&](const Axes& ax, std::span<const double> ys, const char* colour) {
        std::vector<double> px(ka.size()), py(ys.size());
        std::transform(ka.begin(), ka.end(), px.begin(), [&](double v) { return ax.px(v); });
        std::transform(ys.begin(), ys.end(), py.begin(), [&](double v) { return ax.py(v); });
        doc.polyline(px, py, colour);
    };
    draw(top, delay_ratio, kPalette[0]);
    draw(bottom, t2, kPalette[2]);
    top.draw(doc, "", "delay ratio");
    bottom.draw(doc, "ka", "|T|^2");
    return doc.str();
}

}  // namespace ptscatter::cli
