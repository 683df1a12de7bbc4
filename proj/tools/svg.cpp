#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cellflow_cli {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Round tick spacing giving about n ticks over [lo, hi].
double tick_step(double lo, double hi, int n) {
    const double raw = (hi - lo) / n;
    if (!(raw > 0.0)) return 1.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

SvgPlot::SvgPlot(double x_lo, double x_hi, double y_lo, double y_hi, std::string title,
                 std::string x_label, std::string y_label, int width, int height)
    : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), title_(std::move(title)),
      x_label_(std::move(x_label)), y_label_(std::move(y_label)), width_(width), height_(height) {
    if (!(x_hi_ > x_lo_)) x_hi_ = x_lo_ + 1.0;
    if (!(y_hi_ > y_lo_)) y_hi_ = y_lo_ + 1.0;
}

double SvgPlot::px(double x) const {
    return left_ + (x - x_lo_) / (x_hi_ - x_lo_) * (width_ - left_ - right_);
}

double SvgPlot::py(double y) const {
    return height_ - bottom_ - (y - y_lo_) / (y_hi_ - y_lo_) * (height_ - top_ - bottom_);
}

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                       double stroke) {
    if (pts.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fmt(stroke) +
             "\" points=\"";
    for (const auto& [x, y] : pts) body_ += fmt(px(x)) + "," + fmt(py(y)) + " ";
    body_ += "\"/>\n";
}

void SvgPlot::segment(double x0, double y0, double x1, double y1, const std::string& color,
                      double stroke, bool dashed) {
    body_ += "<line x1=\"" + fmt(px(x0)) + "\" y1=\"" + fmt(py(y0)) + "\" x2=\"" + fmt(px(x1)) +
             "\" y2=\"" + fmt(py(y1)) + "\" stroke=\"" + color + "\" stroke-width=\"" +
             fmt(stroke) + "\"" + (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
}

void SvgPlot::circle(double x, double y, double r_px, const std::string& fill) {
    body_ += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"" + fmt(r_px) +
             "\" fill=\"" + fill + "\"/>\n";
}

void SvgPlot::rect(double x0, double y0, double x1, double y1, const std::string& fill) {
    const double a = px(std::min(x0, x1)), b = py(std::max(y0, y1));
    const double w = std::abs(px(x1) - px(x0)), h = std::abs(py(y1) - py(y0));
    body_ += "<rect x=\"" + fmt(a) + "\" y=\"" + fmt(b) + "\" width=\"" + fmt(w) + "\" height=\"" +
             fmt(h) + "\" fill=\"" + fill + "\"/>\n";
}

void SvgPlot::label(double x, double y, const std::string& text, const std::string& color) {
    body_ += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(py(y)) +
             "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"" + color + "\">" +
             escape(text) + "</text>\n";
}

void SvgPlot::legend(const std::string& text, const std::string& color) {
    legend_.emplace_back(text, color);
}

std::string SvgPlot::str() const {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width_) + "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " +
         std::to_string(width_) + " " + std::to_string(height_) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double x0 = left_, x1 = width_ - right_, y0 = top_, y1 = height_ - bottom_;
    s += "<defs><clipPath id=\"data\"><rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) +
         "\" width=\"" + fmt(x1 - x0) + "\" height=\"" + fmt(y1 - y0) +
         "\"/></clipPath></defs>\n";
    s += "<g clip-path=\"url(#data)\">\n" + body_ + "</g>\n";
    s += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(x1 - x0) +
         "\" height=\"" + fmt(y1 - y0) + "\" fill=\"none\" stroke=\"#000\"/>\n";

    const double sx = tick_step(x_lo_, x_hi_, 8);
    for (double t = std::ceil(x_lo_ / sx) * sx; t <= x_hi_ + 1e-9 * sx; t += sx) {
        const double p = px(t);
        s += "<line x1=\"" + fmt(p) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(p) + "\" y2=\"" +
             fmt(y1 + 5) + "\" stroke=\"#000\"/>\n";
        s += "<text x=\"" + fmt(p) + "\" y=\"" + fmt(y1 + 18) +
             "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
             tick_text(t) + "</text>\n";
    }
    const double sy = tick_step(y_lo_, y_hi_, 8);
    for (double t = std::ceil(y_lo_ / sy) * sy; t <= y_hi_ + 1e-9 * sy; t += sy) {
        const double p = py(t);
        s += "<line x1=\"" + fmt(x0 - 5) + "\" y1=\"" + fmt(p) + "\" x2=\"" + fmt(x0) + "\" y2=\"" +
             fmt(p) + "\" stroke=\"#000\"/>\n";
        s += "<text x=\"" + fmt(x0 - 8) + "\" y=\"" + fmt(p + 4) +
             "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">" + tick_text(t) +
             "</text>\n";
    }
    s += "<text x=\"" + fmt(0.5 * (x0 + x1)) + "\" y=\"" + fmt(height_ - 15.0) +
         "\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
         escape(x_label_) + "</text>\n";
    s += "<text transform=\"translate(18," + fmt(0.5 * (y0 + y1)) +
         ") rotate(-90)\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
         escape(y_label_) + "</text>\n";
    s += "<text x=\"" + fmt(0.5 * (x0 + x1)) + "\" y=\"24\" font-size=\"14\" " +
         "font-family=\"sans-serif\" text-anchor=\"middle\">" + escape(title_) + "</text>\n";
    double ly = y0 + 16;
    for (const auto& [text, color] : legend_) {
        s += "<rect x=\"" + fmt(x1 - 150) + "\" y=\"" + fmt(ly - 9) +
             "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
        s += "<text x=\"" + fmt(x1 - 135) + "\" y=\"" + fmt(ly) +
             "\" font-size=\"11\" font-family=\"sans-serif\">" + escape(text) + "</text>\n";
        ly += 15;
    }
    s += "</svg>\n";
    return s;
}

std::string palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
    return colors[i % (sizeof colors / sizeof *colors)];
}

}  // namespace cellflow_cli
