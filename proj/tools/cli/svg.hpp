#pragma once

#include <span>
#include <string>
#include <vector>

namespace ptscatter::cli {

// Minimal SVG builder. All coordinates are written with two decimals so the
// output is byte-stable across platforms.
class SvgDocument {
public:
    SvgDocument(double width, double height);

    void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke = "none");
    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
              bool dashed = false);
    // Breaks the curve wherever a coordinate is non-finite.
    void polyline(std::span<const double> xs, std::span<const double> ys, const std::string& stroke,
                  double width = 1.5);
    void text(double x, double y, const std::string& content, double size = 12.0,
              const std::string& anchor = "middle", double rotate = 0.0);

    // Wraps subsequent elements in <g attributes>...</g>.
    void begin_group(const std::string& attributes);
    void end_group();

    [[nodiscard]] std::string str() const;

private:
    double width_;
    double height_;
    std::string body_;
};

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
};

// Data-to-pixel mapping for one panel plus its frame, ticks and labels.
class Axes {
public:
    Axes(double left, double top, double width, double height, AxisRange x, AxisRange y);

    [[nodiscard]] double px(double x) const;
    [[nodiscard]] double py(double y) const;
    [[nodiscard]] double left() const { return left_; }
    [[nodiscard]] double top() const { return top_; }
    [[nodiscard]] double width() const { return width_; }
    [[nodiscard]] double height() const { return height_; }
    [[nodiscard]] AxisRange x_range() const { return x_; }
    [[nodiscard]] AxisRange y_range() const { return y_; }

    void draw(SvgDocument& doc, const std::string& x_label, const std::string& y_label) const;

private:
    double left_, top_, width_, height_;
    AxisRange x_, y_;
};

// Finite min/max of the values, widened when degenerate.
[[nodiscard]] AxisRange data_range(std::span<const double> values);

// Colour for t in [0, 1] on a perceptually ordered blue-green-yellow ramp.
[[nodiscard]] std::string ramp_colour(double t);

struct LineSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// values[i * xs.size() + j] belongs to (ys[i], xs[j]). Coloured by log10 of the
// value; non-positive or non-finite cells are drawn grey.
[[nodiscard]] std::string heatmap_svg(const std::string& title, std::span<const double> xs, std::span<const double> ys,
                                      std::span<const double> values, const std::string& x_label,
                                      const std::string& y_label, const std::string& value_label);

[[nodiscard]] std::string line_plot_svg(const std::string& title, std::span<const LineSeries> series,
                                        const std::string& x_label, const std::string& y_label,
                                        std::span<const double> vertical_markers = {});

// Delay ratio on top, transmission probability below, sharing the ka axis.
// Dashed verticals at the probability maxima, dashed horizontal at delay = -1.
[[nodiscard]] std::string timing_overlay_svg(const std::string& title, std::span<const double> ka,
                                             std::span<const double> delay_ratio, std::span<const double> t2,
                                             std::span<const double> peak_positions);

}  // namespace ptscatter::cli
