#pragma once

#include <string>
#include <vector>

namespace scnn::harness {

// Minimal deterministic line-chart writer; no plotting dependency.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void add_series(const std::string &label,
            const std::vector<std::pair<double, double>> &points,
            const std::string &color = "", bool dashed = false);

    std::string render() const;
    void write(const std::string &path) const;

private:
    struct Series {
        std::string label;
        std::vector<std::pair<double, double>> points;
        std::string color;
        bool dashed = false;
    };

    std::string title_;
    std::string x_label_;
    std::string y_label_;
    std::vector<Series> series_;
};

} // namespace scnn::harness
