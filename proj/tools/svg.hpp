#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cellflow_cli {

/// Minimal SVG 1.1 plot: a data rectangle with linear axes, ticks and labels.
class SvgPlot {
public:
    SvgPlot(double x_lo, double x_hi, double y_lo, double y_hi, std::string title,
            std::string x_label, std::string y_label, int width = 720, int height = 540);

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  double stroke = 1.5);
    void segment(double x0, double y0, double x1, double y1, const std::string& color,
                 double stroke = 1.0, bool dashed = false);
    void circle(double x, double y, double r_px, const std::string& fill);
    /// Axis-aligned rectangle in data coordinates.
    void rect(double x0, double y0, double x1, double y1, const std::string& fill);
    void label(double x, double y, const std::string& text, const std::string& color = "#000");
    /// Legend entry in the top-right corner.
    void legend(const std::string& text, const std::string& color);

    std::string str() const;

    double px(double x) const;
    double py(double y) const;

private:
    double x_lo_, x_hi_, y_lo_, y_hi_;
    std::string title_, x_label_, y_label_;
    int width_, height_;
    double left_ = 70, right_ = 20, top_ = 40, bottom_ = 55;
    std::string body_;
    std::vector<std::pair<std::string, std::string>> legend_;
};

/// Distinct colour for the i-th category.
std::string palette(std::size_t i);

}  // namespace cellflow_cli
