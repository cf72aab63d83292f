#include "scnn/sc_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scnn {

void validate_divider_code(int code)
{
    if (code < 0 || code > 63) {
        throw std::out_of_range(
            "leak divider code out of range: " + std::to_string(code));
    }
}

void validate_dac_code(int code)
{
    if (code < 0 || code > 127) {
        throw std::out_of_range("DAC code out of range: " + std::to_string(code));
    }
}

AnalogValue quantize_dac(int code)
{
    validate_dac_code(code);
    // -250 mV + code * 500/127 mV, rounded to the Q16 grid. Codes 0 and 127
    // land exactly on -250 and +250.
    const std::int64_t span = 2LL * fx_rail;
    const std::int64_t step_scaled = span * code; // code * 500 mV in raw units
    const std::int32_t offset =
        static_cast<std::int32_t>((step_scaled + 127 / 2) / 127);
    return {offset - fx_rail};
}

AnalogValue DacValue::voltage() const
{
    return quantize_dac(code);
}

double decay_factor(double c_main_ff, double c_leak_ff)
{
    if (!(c_main_ff > 0.0) || !(c_leak_ff > 0.0)) {
        throw std::domain_error("capacitances must be positive");
    }
    return c_main_ff / (c_main_ff + c_leak_ff);
}

double leak_period_from_tau(double tau_ms, double kappa)
{
    if (!(tau_ms > 0.0)) {
        throw std::domain_error("tau must be positive");
    }
    if (!(kappa > 0.0) || !(kappa < 1.0)) {
        throw std::domain_error("kappa must lie in (0,1)");
    }
    return -tau_ms * std::log(kappa);
}

static double tick_ms(TickGranularity granularity)
{
    return granularity == TickGranularity::PerCycle ? bio_cycle_ms : bio_tick_ms;
}

std::optional<double> tau_from_divider(int code, TickGranularity granularity)
{
    validate_divider_code(code);
    if (code == 0) {
        return std::nullopt; // "inf."
    }
    const double kappa = static_cast<double>(kappa_num) / kappa_den;
    return code * tick_ms(granularity) / -std::log(kappa);
}

int divider_from_tau(double tau_ms, TickGranularity granularity)
{
    const double kappa = static_cast<double>(kappa_num) / kappa_den;
    const double period = leak_period_from_tau(tau_ms, kappa);
    const int code = static_cast<int>(std::llround(period / tick_ms(granularity)));
    return code < 1 ? 1 : (code > 63 ? 63 : code);
}

AnalogValue apply_leak_event(AnalogValue v, AnalogValue target)
{
    return {target.raw + fx_kappa(v.raw - target.raw)};
}

AnalogValue apply_leak_event(AnalogValue v, std::int32_t num, std::int32_t den,
        AnalogValue target)
{
    if (den <= 0 || num < 0 || num > den) {
        throw std::domain_error("decay ratio must lie in [0,1]");
    }
    const std::int64_t d = static_cast<std::int64_t>(v.raw - target.raw) * num;
    return {target.raw + static_cast<std::int32_t>(d / den)};
}

} // namespace scnn
