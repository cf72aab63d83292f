#pragma once

#include <cstdint>

#include "scnn/fixed.hpp"
#include "scnn/sc_core.hpp"

namespace scnn {

// Resolved LIAF neuron parameters. The resting voltage is fixed at 0 mV
// differential; C_mem = 75 fF and C_leak = 5 fF are baked into kappa = 15/16.
struct NeuronParams {
    std::int32_t v_thresh = 100 * fx_one;
    std::int32_t v_reset = 0;
    std::int32_t offset = 0; // optional per-neuron comparator offset, default 0

    static NeuronParams from_group(const NeuronGroupConfig &g);
};

struct NeuronState {
    std::int32_t v_mem = 0; // differential membrane voltage, Q16 mV
    bool fired_this_cycle = false;
};

// Charge integration for one column slot; q_total is the summed output of
// all 128 weight scaling stages, clamped to the +-250 mV rail.
inline void integrate(NeuronState &n, std::int64_t q_total)
{
    n.v_mem = fx_clamp(static_cast<std::int64_t>(n.v_mem) + q_total,
            -fx_rail, fx_rail);
}

// One membrane charge-sharing event toward 0 V.
inline void leak_event(NeuronState &n)
{
    n.v_mem = fx_kappa(n.v_mem);
}

// Strict-inequality threshold compare; on a spike the membrane is reset.
inline bool compare_and_fire(NeuronState &n, const NeuronParams &p)
{
    if (n.v_mem + p.offset > p.v_thresh) {
        n.v_mem = p.v_reset;
        n.fired_this_cycle = true;
        return true;
    }
    n.fired_this_cycle = false;
    return false;
}

} // namespace scnn
