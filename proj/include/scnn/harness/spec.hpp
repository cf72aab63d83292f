#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scnn/engine.hpp"

namespace scnn::harness {

// INI-style experiment description (see README for the grammar). Sections:
// [engine] parameter set, [stimulus] spike plan, [probe] recording,
// [sweep] optional axis. SCNN_SEED in the environment overrides `seed`.
struct ExperimentSpec {
    std::string name = "experiment";

    // [engine]
    int divider = 100;
    int u_code = 0;
    int alpha_code = 0;
    int tau_u_code = 0;
    int tau_r_code = 0;
    int tau_psc_code = 0;
    int gain_code = 89;
    int tau_m_code = 0;
    int thresh_code = 89;
    int reset_code = 63;
    std::optional<double> g_weight; // defaults to the engine's constant
    std::vector<int> rows{0};
    int column = 0;
    int weight = 15;
    SynSign sign = SynSign::Excitatory;
    int background_weight = 0;
    SynSign background_sign = SynSign::Excitatory;
    int v_bg_code = 89;

    // [stimulus]
    std::string stimulus_kind = "none"; // none | regular | poisson
    double rate_hz = 50.0;
    int count = 10;
    std::uint64_t start_cycle = 0;
    double duration_ms = 1000.0; // poisson
    std::uint64_t seed = 1;

    // [probe]
    ProbeSelect probe_a{ProbeKind::Psc, 0};
    ProbeSelect probe_b{ProbeKind::Vmem, 0};
    std::uint64_t duration_cycles = 2000;
    double bin_ms = 0.0; // 0 = raw cycle resolution

    // [sweep]
    std::string sweep_axis; // "", "weight", "tau_m_code", parsed values
    std::vector<double> sweep_values;
    std::vector<double> sweep_rates_hz;
    double sweep_duration_s = 10.0;

    void validate() const;

    // Build an engine configured for this spec (all groups get the same
    // settings; the selected rows/column get the synapse weight).
    Engine make_engine() const;
};

ExperimentSpec parse_spec_file(const std::string &path);
ExperimentSpec parse_spec_text(const std::string &text, const std::string &name);

// -250..250 mV -> nearest DAC code.
int dac_code_from_mv(double mv);

} // namespace scnn::harness
