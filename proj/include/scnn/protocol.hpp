#pragma once

#include <array>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace scnn::protocol {

// One FIFO entry: 16-bit header + 32-bit payload, 48 bits total. On the
// wire a packet is 6 bytes, little-endian, header first.
struct Packet {
    std::uint16_t header = 0;
    std::uint32_t payload = 0;

    friend bool operator==(const Packet &, const Packet &) = default;
};

constexpr std::size_t packet_wire_size = 6;

// Input (host -> device) headers carry 4 bits of type and 12 bits of
// address; output (device -> host) headers carry a 5-bit type identifier.
// All assigned codes and the configuration address map live here:
//
//   input types   0x0 spike data        (payload = 4 x [enable<<7 | addr])
//                 0x1 config write      (address in header, value in payload)
//                 0x2 config read       (readback arrives on the output FIFO)
//   output types  0x00 spike vector, neurons 31:0
//                 0x01 spike vector, neurons 63:32
//                 0x02 config readback
//
//   config space  0x000-0x7FF weight RAM window, 2 packed 16-bit synapse
//                             words per address (see cfg_ram_page)
//                 0x800+g*16  presyn group g: +0 U, +1 alpha, +2 tau_u,
//                             +3 tau_R, +4 tau_PSC, +5 PSC gain DAC code
//                 0x900+g*16  neuron group g: +0 threshold DAC, +1 reset
//                             DAC, +2 tau_mem
//                 0xA00 clock divider, 0xA01 probe select, 0xA02 RAM window
//                 page (0/1), 0xA03 background level DAC code, 0xA10-0xA16
//                 plasticity rule parameters
enum class InputType : std::uint8_t {
    Spikes = 0x0,
    ConfigWrite = 0x1,
    ConfigRead = 0x2,
};

enum class OutputType : std::uint8_t {
    SpikeVectorLow = 0x00,
    SpikeVectorHigh = 0x01,
    ConfigReadback = 0x02,
};

constexpr std::uint16_t cfg_ram_base = 0x000;
constexpr std::uint16_t cfg_ram_last = 0x7FF;
constexpr std::uint16_t cfg_presyn_base = 0x800;
constexpr std::uint16_t cfg_neuron_base = 0x900;
constexpr std::uint16_t cfg_clock_divider = 0xA00;
constexpr std::uint16_t cfg_probe_select = 0xA01;
constexpr std::uint16_t cfg_ram_page = 0xA02;
constexpr std::uint16_t cfg_background_level = 0xA03;
constexpr std::uint16_t cfg_ltp_theta_v = 0xA10;
constexpr std::uint16_t cfg_ltp_a_up = 0xA11;
constexpr std::uint16_t cfg_ltp_b_down = 0xA12;
constexpr std::uint16_t cfg_ltp_drift_up = 0xA13;
constexpr std::uint16_t cfg_ltp_drift_down = 0xA14;
constexpr std::uint16_t cfg_ltp_theta_x = 0xA15;
constexpr std::uint16_t cfg_ltp_enabled = 0xA16;

class ProtocolError : public std::runtime_error {
public:
    ProtocolError(const std::string &what, std::uint16_t header)
        : std::runtime_error(what + " (header 0x" + to_hex(header) + ")"),
          header_(header)
    {
    }
    std::uint16_t header() const { return header_; }

private:
    static std::string to_hex(std::uint16_t v);
    std::uint16_t header_;
};

// --- codec ----------------------------------------------------------------

struct SpikeSlot {
    int address = 0; // 0..127
    bool enable = false;
};

using SpikeSlots = std::array<SpikeSlot, 4>;

struct SpikeEvent {
    SpikeSlots slots{};
};
struct ConfigWriteEvent {
    std::uint16_t address = 0;
    std::uint32_t value = 0;
};
struct ConfigReadEvent {
    std::uint16_t address = 0;
};

using Event = std::variant<SpikeEvent, ConfigWriteEvent, ConfigReadEvent>;

Packet encode_input_spikes(const SpikeSlots &slots);
Packet encode_config_write(std::uint16_t address, std::uint32_t value);
Packet encode_config_read(std::uint16_t address);
Event decode_packet(const Packet &p);

struct OutputEvent {
    OutputType type = OutputType::SpikeVectorLow;
    std::uint32_t payload = 0;
};

// 0 packets when nothing fired, otherwise the 64-bit vector as two entries,
// low word first.
std::vector<Packet> emit_output_vector(std::uint64_t fired);
Packet encode_config_readback(std::uint32_t value);
OutputEvent decode_output_packet(const Packet &p);

std::array<std::uint8_t, packet_wire_size> serialize(const Packet &p);
Packet deserialize(const std::uint8_t *bytes);

// Raw concatenation of 6-byte packets (".pkt" replay format).
std::vector<std::uint8_t> serialize_stream(const std::vector<Packet> &packets);
std::vector<Packet> deserialize_stream(const std::vector<std::uint8_t> &bytes);

// --- FIFO -----------------------------------------------------------------

// Bounded packet queue; one producer and one consumer may use it from
// different threads. Overflow is reported through the return value and an
// overflow counter, never silently dropped.
class Fifo {
public:
    explicit Fifo(std::size_t capacity = 256) : capacity_(capacity) {}

    bool push(const Packet &p)
    {
        std::lock_guard lock(mutex_);
        if (queue_.size() >= capacity_) {
            ++overflows_;
            return false;
        }
        queue_.push_back(p);
        return true;
    }

    std::optional<Packet> pop()
    {
        std::lock_guard lock(mutex_);
        if (queue_.empty()) {
            return std::nullopt;
        }
        Packet p = queue_.front();
        queue_.pop_front();
        return p;
    }

    std::size_t size() const
    {
        std::lock_guard lock(mutex_);
        return queue_.size();
    }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t overflows() const
    {
        std::lock_guard lock(mutex_);
        return overflows_;
    }

private:
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::deque<Packet> queue_;
    std::uint64_t overflows_ = 0;
};

} // namespace scnn::protocol
