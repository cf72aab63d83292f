#pragma once

#include <cstdint>
#include <vector>

#include "scnn/fixed.hpp"
#include "scnn/sc_core.hpp"

namespace scnn {

// Saturation rail of the accumulating PSC voltage trace.
constexpr std::int32_t v_sat_raw = 250 * fx_one;

// Resolved per-row short-term plasticity parameters (group codes already
// turned into Q16 quantities; schedules owned by the engine).
struct StpParams {
    std::int32_t u_step = 0;      // U, Q16 in [0, 63/64]
    std::int32_t alpha = 0;       // depression strength, Q16
    std::int32_t v_psc_gain = 0;  // PSC jump amplitude, Q16 mV
    std::int32_t g_weight = 435;  // unit-capacitor charge gain per weight LSB

    static StpParams from_group(const PresynGroupConfig &g,
            std::int32_t g_weight_raw);
};

// Per-row adaptation state. From rest: u = 0, R = 1, v_psc = 0.
struct PresynState {
    std::int32_t u = 0;           // utilization, Q16 in [0,1]
    std::int32_t resources = fx_one; // R, Q16 in [0,1]
    std::int32_t v_psc = 0;       // PSC trace voltage, Q16 mV in [0, V_sat]
    bool pending_spike = false;
};

struct SpikeResult {
    std::int32_t amplitude = 0; // A = u' * R (dimensionless, Q16)
    std::int32_t jump = 0;      // gain * A (Q16 mV), before saturation
};

// Facilitation jump, amplitude readout, depression, PSC jump. The ordering
// is: u' = u + U(1-u) first, A = u'*R, then R' = R - alpha*A, and the PSC
// trace accumulates gain*A up to the saturation rail.
SpikeResult stp_on_spike(PresynState &s, const StpParams &p);

enum class StpTick { Utilization, Resources, Psc };

// One leak event of the given kind: u decays toward 0, R recovers toward 1,
// v_psc decays toward 0.
void stp_decay_event(PresynState &s, StpTick kind);

// Binary-weighted charge scaling: sign * weight * g_W * v_psc. Exactly
// linear in the 4-bit weight.
std::int64_t scale_weight(std::int32_t v_psc, int weight, int sign,
        std::int32_t g_weight);

// Probe utility: drive the state with `count` spikes spaced `interval_cycles`
// apart under alpha = 0, so successive amplitudes recover with tau_R.
// Returns the amplitude sequence.
std::vector<std::int32_t> relax_amplitude_trace(PresynState s, StpParams p,
        int tau_u_code, int tau_r_code, int interval_cycles, int count);

} // namespace scnn
