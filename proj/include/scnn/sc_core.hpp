#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "scnn/fixed.hpp"

namespace scnn {

// One matrix cycle sweeps all 64 columns. In biological time this is always
// 0.62 ms; the clock divider only changes how much wall time one cycle takes.
constexpr double bio_cycle_ms = 0.62;
constexpr int ticks_per_cycle = 8;
constexpr double bio_tick_ms = bio_cycle_ms / ticks_per_cycle;

constexpr int num_rows = 128;
constexpr int num_neurons = 64;
constexpr int num_synapses = num_rows * num_neurons;
constexpr int background_row = 127;
constexpr int group_size = 16;
constexpr int num_presyn_groups = num_rows / group_size;   // 8
constexpr int num_neuron_groups = num_neurons / group_size; // 4

// Global cycle counter plus the 8-bit clock divider. Divider 100 is
// biological realtime (0.62 ms wall per cycle), divider 1 is the maximum
// speed-up of 100 (6.2 us per cycle). State trajectories never depend on it.
struct TimeBase {
    int clock_divider = 100; // 1..255
    std::uint64_t cycle_index = 0;

    double cycle_period_wall_ms() const
    {
        return bio_cycle_ms * clock_divider / 100.0;
    }
    double bio_time_ms() const
    {
        return static_cast<double>(cycle_index) * bio_cycle_ms;
    }
};

enum class TickGranularity { PerCycle, PerEighthCycle };

// 6-bit leak divider. Code 0 encodes "inf." (no leak events, ever); code
// d >= 1 fires one charge-sharing event every d ticks.
struct LeakSchedule {
    int divider_code = 0; // 0..63
    int phase = 0;

    // Advance by n ticks, returning how many leak events fire.
    int advance(int n_ticks)
    {
        if (divider_code == 0) {
            return 0;
        }
        phase += n_ticks;
        int events = phase / divider_code;
        phase %= divider_code;
        return events;
    }

    void reset() { phase = 0; }
};

// 7-bit DAC code -> differential bias voltage, endpoint-inclusive affine
// mapping over -250..+250 mV.
struct DacValue {
    int code = 0; // 0..127

    AnalogValue voltage() const;
};

AnalogValue quantize_dac(int code);

// kappa = c_main / (c_main + c_leak), the per-event charge-sharing ratio.
double decay_factor(double c_main_ff, double c_leak_ff);

// T_leak = -tau * ln(kappa): the event period realizing time constant tau.
double leak_period_from_tau(double tau_ms, double kappa);

// Time constant realized by a divider code at the given tick granularity,
// for biological-realtime operation. Code 0 means "inf." -> nullopt.
std::optional<double> tau_from_divider(int code, TickGranularity granularity);

// Nearest divider code realizing tau_ms (clamped to 1..63).
int divider_from_tau(double tau_ms, TickGranularity granularity);

// One charge-sharing event applied to v, decaying toward target:
// v' = target + kappa * (v - target), kappa = 15/16 in Q16 truncation.
AnalogValue apply_leak_event(AnalogValue v, AnalogValue target);

// Generic-ratio variant for analysis code (exact rational kappa = num/den).
AnalogValue apply_leak_event(AnalogValue v, std::int32_t num, std::int32_t den,
        AnalogValue target);

// --- shared per-group configuration -------------------------------------

// Digital + DAC settings shared by one group of 16 presynaptic circuits.
// U and alpha quantize as code/64.
struct PresynGroupConfig {
    int u_code = 0;         // 0..63, U = code/64
    int alpha_code = 0;     // 0..63, alpha = code/64
    int tau_u_code = 0;     // PerCycle leak divider, 0 = inf
    int tau_r_code = 0;     // PerCycle leak divider, 0 = inf
    int tau_psc_code = 0;   // PerEighthCycle leak divider, 0 = inf
    DacValue v_psc_gain{89}; // PSC jump amplitude scaling
};

struct NeuronGroupConfig {
    DacValue v_thresh{89}; // ~100.4 mV
    DacValue v_reset{63};  // ~-2.0 mV
    int tau_m_code = 0;    // PerEighthCycle leak divider, 0 = inf
};

// Members of a group have no individual storage: a group write changes the
// effective parameter of all 16 members.
struct ParameterGroups {
    std::array<PresynGroupConfig, num_presyn_groups> presyn{};
    std::array<NeuronGroupConfig, num_neuron_groups> neuron{};

    const PresynGroupConfig &presyn_for_row(int row) const
    {
        return presyn[static_cast<std::size_t>(row / group_size)];
    }
    const NeuronGroupConfig &neuron_for(int neuron_index) const
    {
        return neuron[static_cast<std::size_t>(neuron_index / group_size)];
    }
};

constexpr std::int32_t unit_quant(int code) // code/64 in Q16
{
    return code * (fx_one / 64);
}

void validate_divider_code(int code);
void validate_dac_code(int code);

} // namespace scnn
