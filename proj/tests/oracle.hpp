#pragma once

// Independent scalar reference models for the emulator's documented
// fixed-point contract (Q16 raw values, truncation toward zero, kappa =
// 15/16). These re-implement the arithmetic as straight-line recursions so
// that engine trajectories can be checked bit-exactly without touching the
// engine's own code paths.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

constexpr std::int64_t one = 65536;

inline std::int32_t mul(std::int64_t a, std::int64_t b)
{
    return static_cast<std::int32_t>(a * b / one); // trunc toward zero
}

inline std::int32_t kappa(std::int64_t v)
{
    return static_cast<std::int32_t>(v * 15 / 16);
}

// v0 after k charge-sharing events toward target.
inline std::int32_t kappa_pow(std::int32_t v0, int k, std::int32_t target = 0)
{
    std::int32_t v = v0;
    for (int i = 0; i < k; ++i) {
        v = target + kappa(v - target);
    }
    return v;
}

// --- two-variable short-term plasticity recursion ---------------------------

struct Stp {
    std::int32_t u = 0;
    std::int32_t resources = one;

    // returns the amplitude A = u' * R
    std::int32_t spike(std::int32_t u_step, std::int32_t alpha)
    {
        u = u + mul(u_step, one - u);
        const std::int32_t a = mul(u, resources);
        resources = resources - mul(alpha, a);
        return a;
    }

    void decay_u() { u = kappa(u); }
    void decay_r()
    {
        resources = static_cast<std::int32_t>(one - kappa(one - resources));
    }
};

// Amplitude sequence for spikes on given cycles, PerCycle leak schedules
// with the same free-running phase convention as the engine (counters start
// at zero and advance once per cycle at the end of the cycle). alpha is
// switched to zero from spike index `alpha_off_after` onwards (-1 = never).
inline std::vector<std::int32_t> stp_amplitudes(
        const std::vector<std::uint64_t> &spike_cycles, std::int32_t u_step,
        std::int32_t alpha, int tau_u_code, int tau_r_code,
        int alpha_off_after = -1)
{
    Stp s;
    std::vector<std::int32_t> amps;
    int cu = 0, cr = 0;
    std::size_t next = 0;
    const std::uint64_t last = spike_cycles.empty() ? 0 : spike_cycles.back();
    for (std::uint64_t c = 0; c <= last; ++c) {
        if (next < spike_cycles.size() && spike_cycles[next] == c) {
            ++next;
            const std::int32_t a_eff =
                (alpha_off_after >= 0 &&
                 static_cast<int>(amps.size()) >= alpha_off_after)
                    ? 0
                    : alpha;
            amps.push_back(s.spike(u_step, a_eff));
        }
        if (tau_u_code > 0 && ++cu >= tau_u_code) {
            cu = 0;
            s.decay_u();
        }
        if (tau_r_code > 0 && ++cr >= tau_r_code) {
            cr = 0;
            s.decay_r();
        }
    }
    return amps;
}

// --- single-synapse PSC + membrane recursion --------------------------------

struct PsPoint {
    std::int32_t v_psc = 0;
    std::int32_t v_mem = 0;
};

// Per-cycle trace of one PSC trace driving one non-firing membrane, engine
// schedule: jump at the start of the spike cycle, membrane integrates
// weight * fxmul(g, v_psc) then fires its leak events, PSC decays at the
// end of the cycle. Samples are end-of-cycle values.
inline std::vector<PsPoint> psc_psp_trace(std::uint64_t spike_cycle,
        std::int32_t jump, int weight, std::int32_t g_weight, int psc_code,
        int mem_code, std::uint64_t cycles)
{
    std::vector<PsPoint> out;
    out.reserve(cycles);
    std::int64_t v_psc = 0, v_mem = 0;
    int cp = 0, cm = 0;
    for (std::uint64_t c = 0; c < cycles; ++c) {
        if (c == spike_cycle) {
            v_psc += jump;
            if (v_psc > 250 * one) {
                v_psc = 250 * one;
            }
        }
        v_mem += static_cast<std::int64_t>(weight) *
                 mul(g_weight, static_cast<std::int32_t>(v_psc));
        if (mem_code > 0) {
            cm += 8;
            while (cm >= mem_code) {
                cm -= mem_code;
                v_mem = kappa(v_mem);
            }
        }
        if (psc_code > 0) {
            cp += 8;
            while (cp >= psc_code) {
                cp -= psc_code;
                v_psc = kappa(v_psc);
            }
        }
        out.push_back({static_cast<std::int32_t>(v_psc),
                static_cast<std::int32_t>(v_mem)});
    }
    return out;
}

// --- continuous-time (double precision) recursion for the nominal curves ----

struct ContinuousStp {
    double u = 0.0;
    double resources = 1.0;

    double spike(double u_step, double alpha)
    {
        u += u_step * (1.0 - u);
        const double a = u * resources;
        resources *= 1.0 - alpha * u;
        return a;
    }

    void relax(double dt_ms, double tau_u_ms, double tau_r_ms)
    {
        if (tau_u_ms > 0) {
            u *= std::exp(-dt_ms / tau_u_ms);
        }
        if (tau_r_ms > 0) {
            resources = 1.0 - (1.0 - resources) * std::exp(-dt_ms / tau_r_ms);
        }
    }
};

} // namespace oracle
