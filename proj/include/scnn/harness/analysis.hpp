#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scnn::harness {

struct TracePoint {
    double t_ms = 0.0;
    double value = 0.0; // mV (or dimensionless for adaptation variables)
};

using Trace = std::vector<TracePoint>;

struct RatePoint {
    double input_hz = 0.0;
    double output_hz = 0.0;
};

using RatePoints = std::vector<RatePoint>;

class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string &what) : std::runtime_error(what) {}
};

struct ExpFit {
    double amplitude = 0.0;
    double tau_ms = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Mean per time bin, stamped at the bin center. Bins narrower than one
// matrix cycle are clamped to one cycle (the emulated traces have no
// structure below that).
Trace bin_average(const Trace &t, double bin_ms);

// Least squares of log(value) against time for a positive, decaying trace.
// Requires >= 10 samples; non-positive samples or a non-decaying slope are
// fit errors.
ExpFit fit_exponential(const Trace &t);

// Ordinary least squares restricted to points whose OUTPUT rate lies inside
// [window_lo, window_hi]. Requires >= 2 points in the window.
LinearFit fit_linear_window(const RatePoints &points, double window_lo,
        double window_hi);

// x-axis crossing of the windowed linear fit.
double extract_onset_frequency(const RatePoints &points, double window_lo,
        double window_hi);

// Unwindowed OLS helpers for slope analysis.
LinearFit linear_fit(const std::vector<std::pair<double, double>> &xy);
double r_squared(const std::vector<std::pair<double, double>> &xy,
        const LinearFit &fit);

} // namespace scnn::harness
