#pragma once

#include <cmath>
#include <cstdint>

namespace scnn {

// All analog state (membrane, PSC, u, R, plasticity x) is kept as a signed
// Q16 fixed-point value: raw = value * 2^16. Voltages are in millivolts,
// the adaptation variables are dimensionless with 1.0 == fx_one. Every
// multiply truncates toward zero, so decays terminate exactly at their
// target instead of ringing on the last LSB.

constexpr std::int32_t fx_one = 1 << 16;
constexpr std::int32_t fx_rail = 250 * fx_one; // +-250 mV output range

// Charge-sharing decay constant kappa = C/(C+C_leak) = 75/80 = 15/16.
constexpr std::int32_t kappa_num = 15;
constexpr std::int32_t kappa_den = 16;

constexpr std::int32_t fx_mul(std::int32_t a, std::int32_t b)
{
    return static_cast<std::int32_t>(
        (static_cast<std::int64_t>(a) * b) / fx_one);
}

// One charge-sharing event: v *= 15/16, truncating toward zero.
constexpr std::int32_t fx_kappa(std::int32_t v)
{
    return static_cast<std::int32_t>(
        (static_cast<std::int64_t>(v) * kappa_num) / kappa_den);
}

constexpr std::int32_t fx_clamp(std::int64_t v, std::int32_t lo, std::int32_t hi)
{
    if (v < lo) {
        return lo;
    }
    if (v > hi) {
        return hi;
    }
    return static_cast<std::int32_t>(v);
}

inline std::int32_t fx_from_mv(double mv)
{
    return static_cast<std::int32_t>(std::llround(mv * fx_one));
}

constexpr double fx_to_mv(std::int32_t raw)
{
    return static_cast<double>(raw) / fx_one;
}

// A quantized differential voltage relative to V_cm (which is therefore 0).
struct AnalogValue {
    std::int32_t raw = 0;

    static AnalogValue from_mv(double mv) { return {fx_from_mv(mv)}; }
    double mv() const { return fx_to_mv(raw); }

    friend bool operator==(AnalogValue a, AnalogValue b) { return a.raw == b.raw; }
    friend auto operator<=>(AnalogValue a, AnalogValue b) { return a.raw <=> b.raw; }
};

} // namespace scnn
