#include "scnn/protocol.hpp"

namespace scnn::protocol {

std::string ProtocolError::to_hex(std::uint16_t v)
{
    static const char digits[] = "0123456789ABCDEF";
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i) {
        s[static_cast<std::size_t>(3 - i)] = digits[(v >> (4 * i)) & 0xF];
    }
    return s;
}

static std::uint16_t input_header(InputType type, std::uint16_t address)
{
    return static_cast<std::uint16_t>(
        (static_cast<std::uint16_t>(type) << 12) | (address & 0x0FFF));
}

Packet encode_input_spikes(const SpikeSlots &slots)
{
    std::uint32_t payload = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].address < 0 || slots[i].address > 127) {
            throw std::out_of_range("spike address exceeds 7 bits");
        }
        const std::uint32_t byte = (slots[i].enable ? 0x80U : 0U) |
                                   static_cast<std::uint32_t>(slots[i].address);
        payload |= byte << (8 * i);
    }
    return {input_header(InputType::Spikes, 0), payload};
}

Packet encode_config_write(std::uint16_t address, std::uint32_t value)
{
    if (address > 0x0FFF) {
        throw std::out_of_range("config address exceeds 12 bits");
    }
    return {input_header(InputType::ConfigWrite, address), value};
}

Packet encode_config_read(std::uint16_t address)
{
    if (address > 0x0FFF) {
        throw std::out_of_range("config address exceeds 12 bits");
    }
    return {input_header(InputType::ConfigRead, address), 0};
}

Event decode_packet(const Packet &p)
{
    const auto type = static_cast<std::uint16_t>(p.header >> 12);
    const auto address = static_cast<std::uint16_t>(p.header & 0x0FFF);
    switch (type) {
    case static_cast<std::uint16_t>(InputType::Spikes): {
        SpikeEvent ev;
        for (std::size_t i = 0; i < ev.slots.size(); ++i) {
            const std::uint32_t byte = (p.payload >> (8 * i)) & 0xFF;
            ev.slots[i].enable = (byte & 0x80) != 0;
            ev.slots[i].address = static_cast<int>(byte & 0x7F);
        }
        return ev;
    }
    case static_cast<std::uint16_t>(InputType::ConfigWrite):
        return ConfigWriteEvent{address, p.payload};
    case static_cast<std::uint16_t>(InputType::ConfigRead):
        return ConfigReadEvent{address};
    default:
        throw ProtocolError("unknown input packet type", p.header);
    }
}

std::vector<Packet> emit_output_vector(std::uint64_t fired)
{
    if (fired == 0) {
        return {};
    }
    return {
        {static_cast<std::uint16_t>(OutputType::SpikeVectorLow),
         static_cast<std::uint32_t>(fired & 0xFFFFFFFFu)},
        {static_cast<std::uint16_t>(OutputType::SpikeVectorHigh),
         static_cast<std::uint32_t>(fired >> 32)},
    };
}

Packet encode_config_readback(std::uint32_t value)
{
    return {static_cast<std::uint16_t>(OutputType::ConfigReadback), value};
}

OutputEvent decode_output_packet(const Packet &p)
{
    switch (p.header) {
    case static_cast<std::uint16_t>(OutputType::SpikeVectorLow):
    case static_cast<std::uint16_t>(OutputType::SpikeVectorHigh):
    case static_cast<std::uint16_t>(OutputType::ConfigReadback):
        return {static_cast<OutputType>(p.header), p.payload};
    default:
        throw ProtocolError("unknown output packet type", p.header);
    }
}

std::array<std::uint8_t, packet_wire_size> serialize(const Packet &p)
{
    return {
        static_cast<std::uint8_t>(p.header & 0xFF),
        static_cast<std::uint8_t>(p.header >> 8),
        static_cast<std::uint8_t>(p.payload & 0xFF),
        static_cast<std::uint8_t>((p.payload >> 8) & 0xFF),
        static_cast<std::uint8_t>((p.payload >> 16) & 0xFF),
        static_cast<std::uint8_t>((p.payload >> 24) & 0xFF),
    };
}

Packet deserialize(const std::uint8_t *bytes)
{
    Packet p;
    p.header = static_cast<std::uint16_t>(bytes[0] | (bytes[1] << 8));
    p.payload = static_cast<std::uint32_t>(bytes[2]) |
                (static_cast<std::uint32_t>(bytes[3]) << 8) |
                (static_cast<std::uint32_t>(bytes[4]) << 16) |
                (static_cast<std::uint32_t>(bytes[5]) << 24);
    return p;
}

std::vector<std::uint8_t> serialize_stream(const std::vector<Packet> &packets)
{
    std::vector<std::uint8_t> bytes;
    bytes.reserve(packets.size() * packet_wire_size);
    for (const Packet &p : packets) {
        const auto wire = serialize(p);
        bytes.insert(bytes.end(), wire.begin(), wire.end());
    }
    return bytes;
}

std::vector<Packet> deserialize_stream(const std::vector<std::uint8_t> &bytes)
{
    if (bytes.size() % packet_wire_size != 0) {
        throw std::invalid_argument(
            "packet stream must be a multiple of 6 bytes");
    }
    std::vector<Packet> packets;
    packets.reserve(bytes.size() / packet_wire_size);
    for (std::size_t i = 0; i < bytes.size(); i += packet_wire_size) {
        packets.push_back(deserialize(bytes.data() + i));
    }
    return packets;
}

} // namespace scnn::protocol
