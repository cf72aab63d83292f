#pragma once

#include <cstdint>
#include <vector>

namespace scnn::harness {

using SpikeTrain = std::vector<std::uint64_t>; // spike cycles, sorted

// Regular train: spike k lands on cycle start + floor(k/rate / 0.62ms + 0.5).
// Rates above one spike per matrix cycle are rejected.
SpikeTrain gen_regular_train(double rate_hz, int count,
        std::uint64_t start_cycle = 0);

// Seeded Poisson train over [0, duration_ms) of biological time. Events are
// reported per generated arrival; simultaneous arrivals in one cycle stay in
// the train (the input latch collapses them).
SpikeTrain gen_poisson_train(double rate_hz, double duration_ms,
        std::uint64_t seed);

// Walks a sorted train while the engine advances cycle by cycle.
class TrainFeeder {
public:
    explicit TrainFeeder(const SpikeTrain &train) : train_(&train) {}

    // True if the train has a spike on `cycle` (advances the cursor).
    bool due(std::uint64_t cycle)
    {
        bool hit = false;
        while (pos_ < train_->size() && (*train_)[pos_] == cycle) {
            hit = true;
            ++pos_;
        }
        return hit;
    }

private:
    const SpikeTrain *train_;
    std::size_t pos_ = 0;
};

} // namespace scnn::harness
