#include "scnn/harness/stimulus.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "scnn/sc_core.hpp"

namespace scnn::harness {

SpikeTrain gen_regular_train(double rate_hz, int count, std::uint64_t start_cycle)
{
    if (!(rate_hz > 0.0)) {
        throw std::invalid_argument("rate must be positive");
    }
    const double period_ms = 1000.0 / rate_hz;
    if (period_ms < bio_cycle_ms) {
        throw std::invalid_argument(
            "rate exceeds one spike per matrix cycle (1612.9 Hz)");
    }
    SpikeTrain train;
    train.reserve(static_cast<std::size_t>(count < 0 ? 0 : count));
    for (int k = 0; k < count; ++k) {
        train.push_back(start_cycle + static_cast<std::uint64_t>(std::floor(
                                          k * period_ms / bio_cycle_ms + 0.5)));
    }
    return train;
}

SpikeTrain gen_poisson_train(double rate_hz, double duration_ms,
        std::uint64_t seed)
{
    if (rate_hz < 0.0) {
        throw std::invalid_argument("rate must be non-negative");
    }
    SpikeTrain train;
    if (rate_hz == 0.0 || duration_ms <= 0.0) {
        return train;
    }
    // inversion sampling keeps the stream identical across standard
    // libraries for a given seed
    std::mt19937_64 rng(seed);
    const double mean_gap_ms = 1000.0 / rate_hz;
    double t = 0.0;
    for (;;) {
        const double u =
            static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
        t += -std::log1p(-u) * mean_gap_ms;
        if (t >= duration_ms) {
            break;
        }
        train.push_back(static_cast<std::uint64_t>(t / bio_cycle_ms));
    }
    return train;
}

} // namespace scnn::harness
