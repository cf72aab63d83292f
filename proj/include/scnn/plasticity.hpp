#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "scnn/fixed.hpp"
#include "scnn/sc_core.hpp"

namespace scnn {

enum class SynSign : std::uint8_t { Excitatory = 0, Inhibitory = 1 };

// One synapse: two stored 4-bit weights, a sign bit and the analog
// plasticity state x in [0,1] that selects between them.
struct SynapseWord {
    std::uint8_t w_ltp = 0;  // 0..15
    std::uint8_t w_ltd = 0;  // 0..15
    SynSign sign = SynSign::Excitatory;
    std::int32_t x_state = fx_one; // Q16 in [0,1]
};

// Simplified voltage-gated update with bistable drift. The stop-learning
// calcium window of the full rule is intentionally not modeled; only the
// binary-state mechanics needed by the weight path are.
struct LtpParams {
    std::int32_t theta_v = 50 * fx_one; // postsynaptic gate voltage
    std::int32_t a_up = 0;              // step on gated potentiation, Q16
    std::int32_t b_down = 0;            // step on gated depression, Q16
    std::int32_t theta_x = fx_one / 2;  // binary collapse threshold
    std::int32_t drift_up = 0;          // per-cycle bistability drift, Q16
    std::int32_t drift_down = 0;
    bool enabled = false;
};

struct EffectiveWeight {
    int weight = 0; // 0..15
    int sign = +1;  // +1 excitatory, -1 inhibitory
};

// Binary-state collapse: x >= theta_x selects the LTP weight.
inline EffectiveWeight effective_weight(const SynapseWord &w,
        std::int32_t theta_x = fx_one / 2)
{
    return {w.x_state >= theta_x ? w.w_ltp : w.w_ltd,
            w.sign == SynSign::Inhibitory ? -1 : +1};
}

// Per-synapse state update during its column's activation, using the
// pre-reset membrane voltage of the postsynaptic neuron.
void ltp_update(SynapseWord &w, bool presyn_spike, std::int32_t v_mem_post,
        const LtpParams &p);

// 8192-entry synaptic weight RAM, row-major (128 rows x 64 columns).
class WeightRam {
public:
    WeightRam();

    const SynapseWord &read(int row, int col) const;
    void write(int row, int col, const SynapseWord &word);
    SynapseWord &at(int row, int col); // bounds-checked mutable access

    // Flat binary image, one 16-bit little-endian word per synapse in
    // row-major order: bits 3:0 w_ltd, 7:4 w_ltp, 8 sign (1 = inhibitory),
    // 15:9 reserved zero. The analog x state is not persisted; import
    // resets it to 1.0.
    std::vector<std::uint8_t> export_image() const;
    void import_image(const std::vector<std::uint8_t> &image);

    static std::uint16_t pack_word(const SynapseWord &w);
    static SynapseWord unpack_word(std::uint16_t bits);

private:
    std::vector<SynapseWord> words_;
};

void validate_synapse_word(const SynapseWord &w);

} // namespace scnn
