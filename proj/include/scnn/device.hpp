#pragma once

#include <cstdint>

#include "scnn/engine.hpp"
#include "scnn/protocol.hpp"

namespace scnn {

// Packet-level front end: an Engine behind an input and an output FIFO.
// Configuration and spike traffic share the input FIFO and are drained
// between matrix cycles, so config writes never race a running cycle.
class Device {
public:
    explicit Device(std::size_t fifo_capacity = 256)
        : in_(fifo_capacity), out_(fifo_capacity)
    {
    }

    Engine &engine() { return engine_; }
    const Engine &engine() const { return engine_; }

    protocol::Fifo &input_fifo() { return in_; }
    protocol::Fifo &output_fifo() { return out_; }

    // Host side: returns false if the input FIFO is full.
    bool host_push(const protocol::Packet &p) { return in_.push(p); }
    std::optional<protocol::Packet> host_pop() { return out_.pop(); }

    // Drain the input FIFO, run one matrix cycle, emit the spike vector.
    std::uint64_t step();

    // Direct configuration space access (the same dispatch the packet path
    // uses). Unmapped addresses raise ProtocolError.
    void config_space_write(std::uint16_t address, std::uint32_t value);
    std::uint32_t config_space_read(std::uint16_t address) const;

private:
    void apply_event(const protocol::Event &ev);

    Engine engine_;
    protocol::Fifo in_;
    protocol::Fifo out_;
    std::uint32_t ram_page_ = 0;
};

} // namespace scnn
