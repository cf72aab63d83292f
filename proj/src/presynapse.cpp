#include "scnn/presynapse.hpp"

namespace scnn {

StpParams StpParams::from_group(const PresynGroupConfig &g,
        std::int32_t g_weight_raw)
{
    StpParams p;
    p.u_step = unit_quant(g.u_code);
    p.alpha = unit_quant(g.alpha_code);
    p.v_psc_gain = g.v_psc_gain.voltage().raw;
    p.g_weight = g_weight_raw;
    return p;
}

SpikeResult stp_on_spike(PresynState &s, const StpParams &p)
{
    s.u = s.u + fx_mul(p.u_step, fx_one - s.u);
    const std::int32_t amplitude = fx_mul(s.u, s.resources);
    s.resources = s.resources - fx_mul(p.alpha, amplitude);
    const std::int32_t jump = fx_mul(p.v_psc_gain, amplitude);
    s.v_psc = fx_clamp(static_cast<std::int64_t>(s.v_psc) + jump, 0, v_sat_raw);
    return {amplitude, jump};
}

void stp_decay_event(PresynState &s, StpTick kind)
{
    switch (kind) {
    case StpTick::Utilization:
        s.u = fx_kappa(s.u);
        break;
    case StpTick::Resources:
        s.resources = fx_one - fx_kappa(fx_one - s.resources);
        break;
    case StpTick::Psc:
        s.v_psc = fx_kappa(s.v_psc);
        break;
    }
}

std::int64_t scale_weight(std::int32_t v_psc, int weight, int sign,
        std::int32_t g_weight)
{
    const std::int32_t unit = fx_mul(g_weight, v_psc);
    return static_cast<std::int64_t>(sign) * weight * unit;
}

std::vector<std::int32_t> relax_amplitude_trace(PresynState s, StpParams p,
        int tau_u_code, int tau_r_code, int interval_cycles, int count)
{
    p.alpha = 0;
    LeakSchedule u_sched{tau_u_code, 0};
    LeakSchedule r_sched{tau_r_code, 0};
    std::vector<std::int32_t> amps;
    amps.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        amps.push_back(stp_on_spike(s, p).amplitude);
        for (int c = 0; c < interval_cycles; ++c) {
            for (int e = u_sched.advance(1); e > 0; --e) {
                stp_decay_event(s, StpTick::Utilization);
            }
            for (int e = r_sched.advance(1); e > 0; --e) {
                stp_decay_event(s, StpTick::Resources);
            }
        }
    }
    return amps;
}

} // namespace scnn
