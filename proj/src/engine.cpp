#include "scnn/engine.hpp"

#include <stdexcept>
#include <string>

namespace scnn {

static std::int32_t default_charge_gain()
{
    // One spike at weight 15, U = 1, from rest gives a 10 mV membrane step
    // with the default PSC gain.
    const double gain_mv = quantize_dac(89).mv();
    return fx_from_mv(10.0 / (15.0 * gain_mv));
}

Engine::Engine()
    : g_weight_(default_charge_gain()),
      eff_(static_cast<std::size_t>(num_synapses)),
      column_order_(num_neurons)
{
    for (int c = 0; c < num_neurons; ++c) {
        column_order_[static_cast<std::size_t>(c)] = c;
    }
    presyn_[background_row].pending_spike = true;
}

void Engine::set_clock_divider(int divider)
{
    if (divider < 1 || divider > 255) {
        throw std::out_of_range(
            "clock divider out of range: " + std::to_string(divider));
    }
    time_.clock_divider = divider;
}

static void check_group(int group, int count, const char *what)
{
    if (group < 0 || group >= count) {
        throw std::out_of_range(std::string(what) + " group out of range: " +
                                std::to_string(group));
    }
}

void Engine::set_presyn_group(int group, const PresynGroupConfig &cfg)
{
    check_group(group, num_presyn_groups, "presyn");
    if (cfg.u_code < 0 || cfg.u_code > 63 || cfg.alpha_code < 0 ||
        cfg.alpha_code > 63) {
        throw std::out_of_range("U/alpha code out of range");
    }
    validate_divider_code(cfg.tau_u_code);
    validate_divider_code(cfg.tau_r_code);
    validate_divider_code(cfg.tau_psc_code);
    validate_dac_code(cfg.v_psc_gain.code);
    groups_.presyn[static_cast<std::size_t>(group)] = cfg;
    sched_u_[static_cast<std::size_t>(group)].divider_code = cfg.tau_u_code;
    sched_r_[static_cast<std::size_t>(group)].divider_code = cfg.tau_r_code;
    sched_psc_[static_cast<std::size_t>(group)].divider_code = cfg.tau_psc_code;
}

const PresynGroupConfig &Engine::presyn_group(int group) const
{
    check_group(group, num_presyn_groups, "presyn");
    return groups_.presyn[static_cast<std::size_t>(group)];
}

void Engine::set_neuron_group(int group, const NeuronGroupConfig &cfg)
{
    check_group(group, num_neuron_groups, "neuron");
    validate_dac_code(cfg.v_thresh.code);
    validate_dac_code(cfg.v_reset.code);
    validate_divider_code(cfg.tau_m_code);
    groups_.neuron[static_cast<std::size_t>(group)] = cfg;
    sched_mem_[static_cast<std::size_t>(group)].divider_code = cfg.tau_m_code;
}

const NeuronGroupConfig &Engine::neuron_group(int group) const
{
    check_group(group, num_neuron_groups, "neuron");
    return groups_.neuron[static_cast<std::size_t>(group)];
}

StpParams Engine::presyn_params_for_row(int row) const
{
    if (row < 0 || row >= num_rows) {
        throw std::out_of_range("row out of range: " + std::to_string(row));
    }
    return StpParams::from_group(groups_.presyn_for_row(row), g_weight_);
}

NeuronParams Engine::neuron_params_for(int neuron_index) const
{
    if (neuron_index < 0 || neuron_index >= num_neurons) {
        throw std::out_of_range(
            "neuron out of range: " + std::to_string(neuron_index));
    }
    return NeuronParams::from_group(groups_.neuron_for(neuron_index));
}

void Engine::set_charge_gain(std::int32_t g_weight_raw)
{
    g_weight_ = g_weight_raw;
}

void Engine::set_background_level(DacValue level)
{
    validate_dac_code(level.code);
    v_bg_ = level;
}

void Engine::set_residual_leak(std::int32_t num, std::int32_t den)
{
    if (den <= 0 || num < 0 || num > den) {
        throw std::domain_error("residual leak ratio must lie in [0,1]");
    }
    residual_num_ = num;
    residual_den_ = den;
}

void Engine::configure_background(int neuron_index, int weight, SynSign sign)
{
    if (weight < 0 || weight > 15) {
        throw std::out_of_range("background weight out of range");
    }
    SynapseWord w;
    w.w_ltp = static_cast<std::uint8_t>(weight);
    w.w_ltd = static_cast<std::uint8_t>(weight);
    w.sign = sign;
    write_synapse(background_row, neuron_index, w);
}

void Engine::write_synapse(int row, int col, const SynapseWord &word)
{
    ram_.write(row, col, word);
    ram_dirty_ = true;
}

void Engine::set_probe(int slot, ProbeSelect sel)
{
    if (slot < 0 || slot > 1) {
        throw std::out_of_range("probe slot must be 0 or 1");
    }
    if (sel.kind == ProbeKind::Psc && (sel.index < 0 || sel.index >= num_rows)) {
        throw std::out_of_range("probe row out of range");
    }
    if (sel.kind == ProbeKind::Vmem &&
        (sel.index < 0 || sel.index >= num_neurons)) {
        throw std::out_of_range("probe neuron out of range");
    }
    probes_[static_cast<std::size_t>(slot)] = sel;
}

ProbeSelect Engine::probe(int slot) const
{
    if (slot < 0 || slot > 1) {
        throw std::out_of_range("probe slot must be 0 or 1");
    }
    return probes_[static_cast<std::size_t>(slot)];
}

AnalogValue Engine::probe_value(int slot) const
{
    const ProbeSelect sel = probe(slot);
    switch (sel.kind) {
    case ProbeKind::Psc:
        if (sel.index == background_row) {
            return v_bg_.voltage();
        }
        return {presyn_[static_cast<std::size_t>(sel.index)].v_psc};
    case ProbeKind::Vmem:
        return {neurons_[static_cast<std::size_t>(sel.index)].v_mem};
    case ProbeKind::None:
        break;
    }
    return {};
}

void Engine::latch_input(int row)
{
    if (row < 0 || row >= background_row) {
        throw std::out_of_range(
            "input row not host-addressable: " + std::to_string(row));
    }
    presyn_[static_cast<std::size_t>(row)].pending_spike = true;
}

void Engine::latch_inputs(const std::vector<int> &rows)
{
    for (int row : rows) {
        latch_input(row);
    }
}

PresynState Engine::presyn_state(int row) const
{
    if (row < 0 || row >= num_rows) {
        throw std::out_of_range("row out of range: " + std::to_string(row));
    }
    return presyn_[static_cast<std::size_t>(row)];
}

NeuronState Engine::neuron_state(int neuron_index) const
{
    if (neuron_index < 0 || neuron_index >= num_neurons) {
        throw std::out_of_range(
            "neuron out of range: " + std::to_string(neuron_index));
    }
    return neurons_[static_cast<std::size_t>(neuron_index)];
}

void Engine::debug_set_membrane(int neuron_index, AnalogValue v)
{
    neurons_.at(static_cast<std::size_t>(neuron_index)).v_mem =
        fx_clamp(v.raw, -fx_rail, fx_rail);
}

void Engine::debug_set_psc(int row, AnalogValue v)
{
    presyn_.at(static_cast<std::size_t>(row)).v_psc =
        fx_clamp(v.raw, 0, v_sat_raw);
}

void Engine::debug_set_utilization(int row, AnalogValue u)
{
    presyn_.at(static_cast<std::size_t>(row)).u = fx_clamp(u.raw, 0, fx_one);
}

void Engine::debug_set_resources(int row, AnalogValue r)
{
    presyn_.at(static_cast<std::size_t>(row)).resources =
        fx_clamp(r.raw, 0, fx_one);
}

void Engine::enable_amplitude_log(int row)
{
    if (row < 0 || row >= num_rows) {
        throw std::out_of_range("row out of range: " + std::to_string(row));
    }
    amp_log_row_ = row;
    amp_log_.clear();
}

void Engine::disable_amplitude_log()
{
    amp_log_row_ = -1;
    amp_log_.clear();
}

void Engine::set_column_order(const std::vector<int> &order)
{
    if (order.size() != static_cast<std::size_t>(num_neurons)) {
        throw std::invalid_argument("column order must list all 64 columns");
    }
    std::array<bool, num_neurons> seen{};
    for (int c : order) {
        if (c < 0 || c >= num_neurons || seen[static_cast<std::size_t>(c)]) {
            throw std::invalid_argument("column order must be a permutation");
        }
        seen[static_cast<std::size_t>(c)] = true;
    }
    column_order_ = order;
}

void Engine::refresh_effective_weight(int row, int col) const
{
    const EffectiveWeight ew = effective_weight(ram_.read(row, col), ltp_.theta_x);
    eff_[static_cast<std::size_t>(col) * num_rows + static_cast<std::size_t>(row)] =
        static_cast<std::int16_t>(ew.sign * ew.weight);
}

void Engine::refresh_effective_weights() const
{
    for (int row = 0; row < num_rows; ++row) {
        for (int col = 0; col < num_neurons; ++col) {
            refresh_effective_weight(row, col);
        }
    }
    ram_dirty_ = false;
}

std::uint64_t Engine::step_cycle()
{
    if (ram_dirty_) {
        refresh_effective_weights();
    }

    // (1) presynaptic phase: STP updates for all pending rows.
    presyn_[background_row].pending_spike = true;
    presyn_[background_row].v_psc = v_bg_.voltage().raw;
    for (int r = 0; r < background_row; ++r) {
        PresynState &s = presyn_[static_cast<std::size_t>(r)];
        if (!s.pending_spike) {
            continue;
        }
        const StpParams p =
            StpParams::from_group(groups_.presyn_for_row(r), g_weight_);
        const SpikeResult res = stp_on_spike(s, p);
        if (r == amp_log_row_) {
            amp_log_.push_back({time_.cycle_index, res.amplitude, res.jump});
        }
    }

    // Per-row charge units for this cycle; the PSC traces are read-only
    // during the column phase.
    std::array<std::int32_t, num_rows> unit;
    std::array<std::int16_t, num_rows> active;
    int n_active = 0;
    for (int r = 0; r < num_rows; ++r) {
        const std::int32_t u =
            fx_mul(g_weight_, presyn_[static_cast<std::size_t>(r)].v_psc);
        unit[static_cast<std::size_t>(r)] = u;
        if (u != 0) {
            active[static_cast<std::size_t>(n_active++)] =
                static_cast<std::int16_t>(r);
        }
    }

    // Membrane leak events for this cycle, shared per neuron group.
    std::array<int, num_neuron_groups> mem_events;
    for (int g = 0; g < num_neuron_groups; ++g) {
        mem_events[static_cast<std::size_t>(g)] =
            sched_mem_[static_cast<std::size_t>(g)].advance(ticks_per_cycle);
    }

    // (2) sequential column activation.
    std::uint64_t fired = 0;
    for (int ci = 0; ci < num_neurons; ++ci) {
        const int c = column_order_[static_cast<std::size_t>(ci)];
        const std::int16_t *col_eff =
            eff_.data() + static_cast<std::size_t>(c) * num_rows;

        std::int64_t q_total = 0;
        for (int i = 0; i < n_active; ++i) {
            const int r = active[static_cast<std::size_t>(i)];
            q_total += static_cast<std::int64_t>(col_eff[r]) *
                       unit[static_cast<std::size_t>(r)];
        }

        NeuronState &n = neurons_[static_cast<std::size_t>(c)];
        integrate(n, q_total);
        for (int e = mem_events[static_cast<std::size_t>(c / group_size)];
             e > 0; --e) {
            leak_event(n);
        }
        const std::int32_t v_pre = n.v_mem;
        const NeuronParams np =
            NeuronParams::from_group(groups_.neuron_for(c));
        if (compare_and_fire(n, np)) {
            fired |= std::uint64_t{1} << c;
        }

        if (ltp_.enabled) {
            for (int r = 0; r < num_rows; ++r) {
                SynapseWord &w = ram_.at(r, c);
                ltp_update(w, presyn_[static_cast<std::size_t>(r)].pending_spike,
                        v_pre, ltp_);
                refresh_effective_weight(r, c);
            }
        }
    }

    // (3) presynaptic decay events, shared per presyn group.
    for (int g = 0; g < num_presyn_groups; ++g) {
        const int r0 = g * group_size;
        const int r1 = (g == num_presyn_groups - 1) ? background_row
                                                    : r0 + group_size;
        const int eu = sched_u_[static_cast<std::size_t>(g)].advance(1);
        const int er = sched_r_[static_cast<std::size_t>(g)].advance(1);
        const int ep =
            sched_psc_[static_cast<std::size_t>(g)].advance(ticks_per_cycle);
        for (int r = r0; r < r1; ++r) {
            PresynState &s = presyn_[static_cast<std::size_t>(r)];
            for (int e = eu; e > 0; --e) {
                stp_decay_event(s, StpTick::Utilization);
            }
            for (int e = er; e > 0; --e) {
                stp_decay_event(s, StpTick::Resources);
            }
            for (int e = ep; e > 0; --e) {
                stp_decay_event(s, StpTick::Psc);
            }
        }
    }

    if (residual_num_ > 0) {
        const auto bleed = [this](std::int32_t v) {
            for (int t = 0; t < ticks_per_cycle; ++t) {
                v -= static_cast<std::int32_t>(
                    static_cast<std::int64_t>(v) * residual_num_ / residual_den_);
            }
            return v;
        };
        for (int r = 0; r < background_row; ++r) {
            PresynState &s = presyn_[static_cast<std::size_t>(r)];
            s.u = bleed(s.u);
            s.resources = bleed(s.resources);
            s.v_psc = bleed(s.v_psc);
        }
        for (NeuronState &n : neurons_) {
            n.v_mem = bleed(n.v_mem);
        }
    }

    // (4) clear the input latch and publish the spike vector.
    for (int r = 0; r < background_row; ++r) {
        presyn_[static_cast<std::size_t>(r)].pending_spike = false;
    }
    output_vector_ = fired;
    ++time_.cycle_index;
    return fired;
}

std::uint64_t Engine::state_hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (i * 8)) & 0xFF;
            h *= 0x100000001b3ULL;
        }
    };
    mix(time_.cycle_index);
    mix(output_vector_);
    for (const PresynState &s : presyn_) {
        mix(static_cast<std::uint32_t>(s.u));
        mix(static_cast<std::uint32_t>(s.resources));
        mix(static_cast<std::uint32_t>(s.v_psc));
        mix(s.pending_spike ? 1 : 0);
    }
    for (const NeuronState &n : neurons_) {
        mix(static_cast<std::uint32_t>(n.v_mem));
        mix(n.fired_this_cycle ? 1 : 0);
    }
    for (int r = 0; r < num_rows; ++r) {
        for (int c = 0; c < num_neurons; ++c) {
            const SynapseWord &w = ram_.read(r, c);
            mix(WeightRam::pack_word(w));
            mix(static_cast<std::uint32_t>(w.x_state));
        }
    }
    return h;
}

} // namespace scnn
