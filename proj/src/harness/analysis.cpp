#include "scnn/harness/analysis.hpp"

#include <cmath>

#include "scnn/sc_core.hpp"

namespace scnn::harness {

Trace bin_average(const Trace &t, double bin_ms)
{
    if (t.empty()) {
        return {};
    }
    if (bin_ms < bio_cycle_ms) {
        bin_ms = bio_cycle_ms;
    }
    Trace out;
    const double t0 = t.front().t_ms;
    std::size_t i = 0;
    for (int bin = 0; i < t.size(); ++bin) {
        const double hi = t0 + (bin + 1) * bin_ms;
        double sum = 0.0;
        int n = 0;
        while (i < t.size() && t[i].t_ms < hi) {
            sum += t[i].value;
            ++n;
            ++i;
        }
        if (n > 0) {
            out.push_back({t0 + (bin + 0.5) * bin_ms, sum / n});
        }
    }
    return out;
}

ExpFit fit_exponential(const Trace &t)
{
    if (t.size() < 10) {
        throw FitError("exponential fit needs at least 10 samples");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const TracePoint &p : t) {
        if (!(p.value > 0.0)) {
            throw FitError("exponential fit needs positive samples");
        }
        const double y = std::log(p.value);
        sx += p.t_ms;
        sy += y;
        sxx += p.t_ms * p.t_ms;
        sxy += p.t_ms * y;
    }
    const double n = static_cast<double>(t.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw FitError("degenerate time axis");
    }
    const double slope = (n * sxy - sx * sy) / denom;
    if (!(slope < 0.0)) {
        throw FitError("trace is not decaying (tau would be infinite)");
    }
    const double lna = (sy - slope * sx) / n;
    return {std::exp(lna), -1.0 / slope};
}

LinearFit fit_linear_window(const RatePoints &points, double window_lo,
        double window_hi)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const RatePoint &p : points) {
        if (p.output_hz < window_lo || p.output_hz > window_hi) {
            continue;
        }
        sx += p.input_hz;
        sy += p.output_hz;
        sxx += p.input_hz * p.input_hz;
        sxy += p.input_hz * p.output_hz;
        ++n;
    }
    if (n < 2) {
        throw FitError("fewer than 2 points inside the fit window");
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw FitError("degenerate input axis");
    }
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

double extract_onset_frequency(const RatePoints &points, double window_lo,
        double window_hi)
{
    const LinearFit f = fit_linear_window(points, window_lo, window_hi);
    if (f.slope == 0.0) {
        throw FitError("zero slope, no onset crossing");
    }
    return -f.intercept / f.slope;
}

LinearFit linear_fit(const std::vector<std::pair<double, double>> &xy)
{
    if (xy.size() < 2) {
        throw FitError("linear fit needs at least 2 points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &[x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(xy.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw FitError("degenerate input axis");
    }
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

double r_squared(const std::vector<std::pair<double, double>> &xy,
        const LinearFit &fit)
{
    double sy = 0;
    for (const auto &[x, y] : xy) {
        sy += y;
    }
    const double ybar = sy / static_cast<double>(xy.size());
    double ss_res = 0, ss_tot = 0;
    for (const auto &[x, y] : xy) {
        const double e = y - (fit.slope * x + fit.intercept);
        ss_res += e * e;
        ss_tot += (y - ybar) * (y - ybar);
    }
    if (ss_tot == 0.0) {
        return 1.0;
    }
    return 1.0 - ss_res / ss_tot;
}

} // namespace scnn::harness
