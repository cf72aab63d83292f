#include "scnn/device.hpp"

namespace scnn {

using namespace protocol;

namespace {

struct GroupReg {
    int group = 0;
    int reg = 0;
};

std::optional<GroupReg> decode_group_addr(std::uint16_t address,
        std::uint16_t base, int group_count, int reg_count)
{
    if (address < base ||
        address >= base + static_cast<std::uint16_t>(group_count * 16)) {
        return std::nullopt;
    }
    const int offset = address - base;
    const GroupReg gr{offset / 16, offset % 16};
    if (gr.reg >= reg_count) {
        return std::nullopt;
    }
    return gr;
}

std::uint32_t encode_probe(const ProbeSelect &a, const ProbeSelect &b)
{
    const auto pack = [](const ProbeSelect &s) {
        return (static_cast<std::uint32_t>(s.kind) << 8) |
               static_cast<std::uint32_t>(s.index & 0xFF);
    };
    return pack(a) | (pack(b) << 16);
}

ProbeSelect decode_probe_half(std::uint32_t half, std::uint16_t address)
{
    const auto kind = (half >> 8) & 0x3;
    if (kind > 2) {
        throw ProtocolError("invalid probe kind",
                static_cast<std::uint16_t>(address));
    }
    return {static_cast<ProbeKind>(kind), static_cast<int>(half & 0xFF)};
}

} // namespace

void Device::config_space_write(std::uint16_t address, std::uint32_t value)
{
    if (address <= cfg_ram_last) {
        // two packed synapse words per address, low word first
        const std::uint32_t pair =
            ram_page_ * 2048 + static_cast<std::uint32_t>(address);
        const std::uint32_t idx = pair * 2;
        engine_.write_synapse(static_cast<int>(idx / num_neurons),
                static_cast<int>(idx % num_neurons),
                WeightRam::unpack_word(static_cast<std::uint16_t>(value)));
        engine_.write_synapse(static_cast<int>((idx + 1) / num_neurons),
                static_cast<int>((idx + 1) % num_neurons),
                WeightRam::unpack_word(static_cast<std::uint16_t>(value >> 16)));
        return;
    }
    if (const auto gr = decode_group_addr(address, cfg_presyn_base,
                num_presyn_groups, 6)) {
        PresynGroupConfig cfg = engine_.presyn_group(gr->group);
        const int v = static_cast<int>(value);
        switch (gr->reg) {
        case 0: cfg.u_code = v; break;
        case 1: cfg.alpha_code = v; break;
        case 2: cfg.tau_u_code = v; break;
        case 3: cfg.tau_r_code = v; break;
        case 4: cfg.tau_psc_code = v; break;
        case 5: cfg.v_psc_gain = DacValue{v}; break;
        }
        engine_.set_presyn_group(gr->group, cfg);
        return;
    }
    if (const auto gr = decode_group_addr(address, cfg_neuron_base,
                num_neuron_groups, 3)) {
        NeuronGroupConfig cfg = engine_.neuron_group(gr->group);
        const int v = static_cast<int>(value);
        switch (gr->reg) {
        case 0: cfg.v_thresh = DacValue{v}; break;
        case 1: cfg.v_reset = DacValue{v}; break;
        case 2: cfg.tau_m_code = v; break;
        }
        engine_.set_neuron_group(gr->group, cfg);
        return;
    }
    switch (address) {
    case cfg_clock_divider:
        engine_.set_clock_divider(static_cast<int>(value));
        return;
    case cfg_probe_select:
        engine_.set_probe(0, decode_probe_half(value & 0xFFFF, address));
        engine_.set_probe(1, decode_probe_half(value >> 16, address));
        return;
    case cfg_ram_page:
        if (value > 1) {
            throw ProtocolError("RAM page must be 0 or 1", address);
        }
        ram_page_ = value;
        return;
    case cfg_background_level:
        engine_.set_background_level(DacValue{static_cast<int>(value)});
        return;
    case cfg_ltp_theta_v:
    case cfg_ltp_a_up:
    case cfg_ltp_b_down:
    case cfg_ltp_drift_up:
    case cfg_ltp_drift_down:
    case cfg_ltp_theta_x:
    case cfg_ltp_enabled: {
        LtpParams p = engine_.plasticity();
        const std::int32_t raw = static_cast<std::int32_t>(value);
        switch (address) {
        case cfg_ltp_theta_v: p.theta_v = raw; break;
        case cfg_ltp_a_up: p.a_up = raw; break;
        case cfg_ltp_b_down: p.b_down = raw; break;
        case cfg_ltp_drift_up: p.drift_up = raw; break;
        case cfg_ltp_drift_down: p.drift_down = raw; break;
        case cfg_ltp_theta_x: p.theta_x = raw; break;
        case cfg_ltp_enabled: p.enabled = value != 0; break;
        }
        engine_.set_plasticity(p);
        return;
    }
    default:
        throw ProtocolError("unmapped config address", address);
    }
}

std::uint32_t Device::config_space_read(std::uint16_t address) const
{
    if (address <= cfg_ram_last) {
        const std::uint32_t pair =
            ram_page_ * 2048 + static_cast<std::uint32_t>(address);
        const std::uint32_t idx = pair * 2;
        const std::uint16_t lo = WeightRam::pack_word(engine_.ram().read(
                static_cast<int>(idx / num_neurons),
                static_cast<int>(idx % num_neurons)));
        const std::uint16_t hi = WeightRam::pack_word(engine_.ram().read(
                static_cast<int>((idx + 1) / num_neurons),
                static_cast<int>((idx + 1) % num_neurons)));
        return static_cast<std::uint32_t>(lo) |
               (static_cast<std::uint32_t>(hi) << 16);
    }
    if (const auto gr = decode_group_addr(address, cfg_presyn_base,
                num_presyn_groups, 6)) {
        const PresynGroupConfig &cfg = engine_.presyn_group(gr->group);
        switch (gr->reg) {
        case 0: return static_cast<std::uint32_t>(cfg.u_code);
        case 1: return static_cast<std::uint32_t>(cfg.alpha_code);
        case 2: return static_cast<std::uint32_t>(cfg.tau_u_code);
        case 3: return static_cast<std::uint32_t>(cfg.tau_r_code);
        case 4: return static_cast<std::uint32_t>(cfg.tau_psc_code);
        case 5: return static_cast<std::uint32_t>(cfg.v_psc_gain.code);
        }
    }
    if (const auto gr = decode_group_addr(address, cfg_neuron_base,
                num_neuron_groups, 3)) {
        const NeuronGroupConfig &cfg = engine_.neuron_group(gr->group);
        switch (gr->reg) {
        case 0: return static_cast<std::uint32_t>(cfg.v_thresh.code);
        case 1: return static_cast<std::uint32_t>(cfg.v_reset.code);
        case 2: return static_cast<std::uint32_t>(cfg.tau_m_code);
        }
    }
    switch (address) {
    case cfg_clock_divider:
        return static_cast<std::uint32_t>(engine_.clock_divider());
    case cfg_probe_select:
        return encode_probe(engine_.probe(0), engine_.probe(1));
    case cfg_ram_page:
        return ram_page_;
    case cfg_background_level:
        return static_cast<std::uint32_t>(engine_.background_level().code);
    case cfg_ltp_theta_v:
        return static_cast<std::uint32_t>(engine_.plasticity().theta_v);
    case cfg_ltp_a_up:
        return static_cast<std::uint32_t>(engine_.plasticity().a_up);
    case cfg_ltp_b_down:
        return static_cast<std::uint32_t>(engine_.plasticity().b_down);
    case cfg_ltp_drift_up:
        return static_cast<std::uint32_t>(engine_.plasticity().drift_up);
    case cfg_ltp_drift_down:
        return static_cast<std::uint32_t>(engine_.plasticity().drift_down);
    case cfg_ltp_theta_x:
        return static_cast<std::uint32_t>(engine_.plasticity().theta_x);
    case cfg_ltp_enabled:
        return engine_.plasticity().enabled ? 1 : 0;
    default:
        throw ProtocolError("unmapped config address", address);
    }
}

void Device::apply_event(const Event &ev)
{
    if (const auto *spikes = std::get_if<SpikeEvent>(&ev)) {
        for (const SpikeSlot &slot : spikes->slots) {
            if (slot.enable) {
                engine_.latch_input(slot.address);
            }
        }
        return;
    }
    if (const auto *write = std::get_if<ConfigWriteEvent>(&ev)) {
        config_space_write(write->address, write->value);
        return;
    }
    const auto &read = std::get<ConfigReadEvent>(ev);
    const std::uint32_t value = config_space_read(read.address);
    if (!out_.push(encode_config_readback(value))) {
        throw ProtocolError("output FIFO overflow on readback", read.address);
    }
}

std::uint64_t Device::step()
{
    while (auto p = in_.pop()) {
        apply_event(decode_packet(*p));
    }
    const std::uint64_t fired = engine_.step_cycle();
    for (const Packet &p : emit_output_vector(fired)) {
        if (!out_.push(p)) {
            throw ProtocolError("output FIFO overflow on spike vector",
                    p.header);
        }
    }
    return fired;
}

} // namespace scnn
