#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "scnn/fixed.hpp"
#include "scnn/neuron.hpp"
#include "scnn/plasticity.hpp"
#include "scnn/presynapse.hpp"
#include "scnn/sc_core.hpp"

namespace scnn {

enum class ProbeKind : std::uint8_t { None = 0, Psc = 1, Vmem = 2 };

struct ProbeSelect {
    ProbeKind kind = ProbeKind::None;
    int index = 0;
};

struct AmplitudeEvent {
    std::uint64_t cycle = 0;
    std::int32_t amplitude = 0; // A = u' * R, Q16
    std::int32_t jump = 0;      // gain * A, Q16 mV
};

// Cycle-accurate emulation of the 128x64 synaptic matrix. One step_cycle()
// call is one full sequential pass over the 64 columns:
//
//   1. presynaptic phase: every row with a pending input spike runs its
//      STP update and adds a PSC jump; row 127 is always active at the
//      constant background level
//   2. column phase, c = 0..63: the charge collected from all 128 weight
//      scaling stages is integrated on membrane c, the membrane's leak
//      events for this cycle fire, the comparator checks the threshold and
//      resets on a spike, and (when enabled) the plasticity rule updates the
//      column's synapse states against the pre-reset membrane voltage
//   3. PSC/u/R decay events fire per their group schedules
//   4. the input latch clears and the 64-bit spike vector is returned
//
// Trajectories depend only on cycle index, never on the clock divider.
class Engine {
public:
    Engine();

    // --- configuration ----------------------------------------------------
    void set_clock_divider(int divider); // 1..255
    int clock_divider() const { return time_.clock_divider; }

    void set_presyn_group(int group, const PresynGroupConfig &cfg);
    const PresynGroupConfig &presyn_group(int group) const;
    void set_neuron_group(int group, const NeuronGroupConfig &cfg);
    const NeuronGroupConfig &neuron_group(int group) const;

    // Effective (group-resolved) parameters for one row / neuron.
    StpParams presyn_params_for_row(int row) const;
    NeuronParams neuron_params_for(int neuron_index) const;

    void set_charge_gain(std::int32_t g_weight_raw);
    std::int32_t charge_gain() const { return g_weight_; }

    void set_background_level(DacValue level); // V_bg held on row 127
    DacValue background_level() const { return v_bg_; }
    void configure_background(int neuron_index, int weight, SynSign sign);

    // Residual switch leakage: an extra decay of num/den toward 0 V applied
    // to every stored voltage on each eighth-cycle tick. Off by default
    // (ideal low-leakage switches).
    void set_residual_leak(std::int32_t num, std::int32_t den);

    WeightRam &ram()
    {
        ram_dirty_ = true;
        return ram_;
    }
    const WeightRam &ram() const { return ram_; }
    void write_synapse(int row, int col, const SynapseWord &word);

    void set_plasticity(const LtpParams &params) { ltp_ = params; }
    const LtpParams &plasticity() const { return ltp_; }

    void set_probe(int slot, ProbeSelect sel); // slot 0 or 1
    ProbeSelect probe(int slot) const;
    AnalogValue probe_value(int slot) const;

    // --- runtime -----------------------------------------------------------
    // Register input spikes for the next cycle. Addresses must be < 127;
    // duplicates collapse (one-bit latch per row).
    void latch_inputs(const std::vector<int> &rows);
    void latch_input(int row);

    // Advance one matrix cycle; returns the 64-bit output spike vector.
    std::uint64_t step_cycle();

    std::uint64_t output_vector() const { return output_vector_; }
    const TimeBase &time() const { return time_; }
    std::uint64_t cycle() const { return time_.cycle_index; }

    PresynState presyn_state(int row) const;
    NeuronState neuron_state(int neuron_index) const;

    // FNV-1a hash over the full dynamical state (configuration-independent
    // quantities like the clock divider are excluded).
    std::uint64_t state_hash() const;

    // --- emulator state injection / instrumentation ------------------------
    void debug_set_membrane(int neuron_index, AnalogValue v);
    void debug_set_psc(int row, AnalogValue v);
    void debug_set_utilization(int row, AnalogValue u);
    void debug_set_resources(int row, AnalogValue r);

    void enable_amplitude_log(int row);
    void disable_amplitude_log();
    const std::vector<AmplitudeEvent> &amplitude_log() const { return amp_log_; }

    // Column processing order override (columns are independent within a
    // cycle, so any permutation yields the same trajectory).
    void set_column_order(const std::vector<int> &order);

private:
    void refresh_effective_weights() const;
    void refresh_effective_weight(int row, int col) const;

    TimeBase time_;
    ParameterGroups groups_;
    std::int32_t g_weight_;
    DacValue v_bg_{89};
    std::int32_t residual_num_ = 0;
    std::int32_t residual_den_ = 1;

    std::array<PresynState, num_rows> presyn_{};
    std::array<NeuronState, num_neurons> neurons_{};
    WeightRam ram_;
    LtpParams ltp_;

    std::array<LeakSchedule, num_presyn_groups> sched_u_{};
    std::array<LeakSchedule, num_presyn_groups> sched_r_{};
    std::array<LeakSchedule, num_presyn_groups> sched_psc_{};
    std::array<LeakSchedule, num_neuron_groups> sched_mem_{};

    std::uint64_t output_vector_ = 0;
    std::array<ProbeSelect, 2> probes_{};

    // column-major signed effective weights, rebuilt lazily after RAM writes
    mutable std::vector<std::int16_t> eff_;
    mutable bool ram_dirty_ = true;

    std::vector<int> column_order_;
    int amp_log_row_ = -1;
    std::vector<AmplitudeEvent> amp_log_;
};

} // namespace scnn
