#include "scnn/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace scnn::harness {

namespace {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const char *default_colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
        "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

// round limits to a friendly tick step
double nice_step(double span)
{
    if (span <= 0) {
        return 1.0;
    }
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r < 1.5) {
        return mag;
    }
    if (r < 3.5) {
        return 2 * mag;
    }
    if (r < 7.5) {
        return 5 * mag;
    }
    return 10 * mag;
}

} // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)),
      y_label_(std::move(y_label))
{
}

void SvgPlot::add_series(const std::string &label,
        const std::vector<std::pair<double, double>> &points,
        const std::string &color, bool dashed)
{
    Series s;
    s.label = label;
    s.points = points;
    s.color = color.empty()
                  ? default_colors[series_.size() % std::size(default_colors)]
                  : color;
    s.dashed = dashed;
    series_.push_back(std::move(s));
}

std::string SvgPlot::render() const
{
    const double width = 860, height = 520;
    const double ml = 70, mr = 160, mt = 40, mb = 55;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Series &s : series_) {
        for (const auto &[x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (series_.empty() || xmin > xmax) {
        xmin = ymin = 0;
        xmax = ymax = 1;
    }
    if (xmax == xmin) {
        xmax = xmin + 1;
    }
    if (ymax == ymin) {
        ymax = ymin + 1;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
           "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) +
           " " + fmt(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"24\" font-size=\"16\" "
           "text-anchor=\"middle\" font-family=\"sans-serif\">" + title_ +
           "</text>\n";

    // axes box
    out += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" +
           fmt(pw) + "\" height=\"" + fmt(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xstep = nice_step(xmax - xmin);
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-12;
         x += xstep) {
        out += "<line x1=\"" + fmt(sx(x)) + "\" y1=\"" + fmt(mt + ph) +
               "\" x2=\"" + fmt(sx(x)) + "\" y2=\"" + fmt(mt + ph + 5) +
               "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(sx(x)) + "\" y=\"" + fmt(mt + ph + 20) +
               "\" font-size=\"12\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\">" + fmt(x) + "</text>\n";
    }
    const double ystep = nice_step(ymax - ymin);
    for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-12;
         y += ystep) {
        out += "<line x1=\"" + fmt(ml - 5) + "\" y1=\"" + fmt(sy(y)) +
               "\" x2=\"" + fmt(ml) + "\" y2=\"" + fmt(sy(y)) +
               "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(sy(y) + 4) +
               "\" font-size=\"12\" text-anchor=\"end\" "
               "font-family=\"sans-serif\">" + fmt(y) + "</text>\n";
    }
    out += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(height - 12) +
           "\" font-size=\"13\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">" + x_label_ + "</text>\n";
    out += "<text x=\"18\" y=\"" + fmt(mt + ph / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" transform=\"rotate(-90 18 " +
           fmt(mt + ph / 2) + ")\">" + y_label_ + "</text>\n";

    for (std::size_t i = 0; i < series_.size(); ++i) {
        const Series &s = series_[i];
        std::string pts;
        for (const auto &[x, y] : s.points) {
            pts += fmt(sx(x)) + "," + fmt(sy(y)) + " ";
        }
        out += "<polyline fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.5\"" +
               (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" +
               pts + "\"/>\n";
        const double ly = mt + 18 + 20 * static_cast<double>(i);
        out += "<line x1=\"" + fmt(ml + pw + 10) + "\" y1=\"" + fmt(ly) +
               "\" x2=\"" + fmt(ml + pw + 34) + "\" y2=\"" + fmt(ly) +
               "\" stroke=\"" + s.color + "\" stroke-width=\"2\"" +
               (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
        out += "<text x=\"" + fmt(ml + pw + 40) + "\" y=\"" + fmt(ly + 4) +
               "\" font-size=\"12\" font-family=\"sans-serif\">" + s.label +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

void SvgPlot::write(const std::string &path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << render();
}

} // namespace scnn::harness
