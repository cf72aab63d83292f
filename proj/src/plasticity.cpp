#include "scnn/plasticity.hpp"

#include <stdexcept>
#include <string>

namespace scnn {

void validate_synapse_word(const SynapseWord &w)
{
    if (w.w_ltp > 15 || w.w_ltd > 15) {
        throw std::out_of_range("synapse weight exceeds 4 bits");
    }
    if (w.x_state < 0 || w.x_state > fx_one) {
        throw std::out_of_range("synapse x state outside [0,1]");
    }
}

void ltp_update(SynapseWord &w, bool presyn_spike, std::int32_t v_mem_post,
        const LtpParams &p)
{
    if (!p.enabled) {
        return;
    }
    std::int32_t x = w.x_state;
    if (presyn_spike) {
        if (v_mem_post > p.theta_v) {
            x = fx_clamp(static_cast<std::int64_t>(x) + p.a_up, 0, fx_one);
        } else {
            x = fx_clamp(static_cast<std::int64_t>(x) - p.b_down, 0, fx_one);
        }
    }
    if (x >= p.theta_x) {
        x = fx_clamp(static_cast<std::int64_t>(x) + p.drift_up, 0, fx_one);
    } else {
        x = fx_clamp(static_cast<std::int64_t>(x) - p.drift_down, 0, fx_one);
    }
    w.x_state = x;
}

WeightRam::WeightRam() : words_(num_synapses) {}

static std::size_t ram_index(int row, int col)
{
    if (row < 0 || row >= num_rows) {
        throw std::out_of_range("synapse row out of range: " + std::to_string(row));
    }
    if (col < 0 || col >= num_neurons) {
        throw std::out_of_range(
            "synapse column out of range: " + std::to_string(col));
    }
    return static_cast<std::size_t>(row) * num_neurons +
           static_cast<std::size_t>(col);
}

const SynapseWord &WeightRam::read(int row, int col) const
{
    return words_[ram_index(row, col)];
}

void WeightRam::write(int row, int col, const SynapseWord &word)
{
    validate_synapse_word(word);
    words_[ram_index(row, col)] = word;
}

SynapseWord &WeightRam::at(int row, int col)
{
    return words_[ram_index(row, col)];
}

std::uint16_t WeightRam::pack_word(const SynapseWord &w)
{
    return static_cast<std::uint16_t>(
        (w.w_ltd & 0xF) | ((w.w_ltp & 0xF) << 4) |
        ((w.sign == SynSign::Inhibitory ? 1 : 0) << 8));
}

SynapseWord WeightRam::unpack_word(std::uint16_t bits)
{
    SynapseWord w;
    w.w_ltd = bits & 0xF;
    w.w_ltp = (bits >> 4) & 0xF;
    w.sign = ((bits >> 8) & 1) != 0 ? SynSign::Inhibitory : SynSign::Excitatory;
    w.x_state = fx_one;
    return w;
}

std::vector<std::uint8_t> WeightRam::export_image() const
{
    std::vector<std::uint8_t> image;
    image.reserve(words_.size() * 2);
    for (const SynapseWord &w : words_) {
        const std::uint16_t bits = pack_word(w);
        image.push_back(static_cast<std::uint8_t>(bits & 0xFF));
        image.push_back(static_cast<std::uint8_t>(bits >> 8));
    }
    return image;
}

void WeightRam::import_image(const std::vector<std::uint8_t> &image)
{
    if (image.size() != static_cast<std::size_t>(num_synapses) * 2) {
        throw std::invalid_argument("weight RAM image must be 16384 bytes");
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
        const std::uint16_t bits = static_cast<std::uint16_t>(
            image[2 * i] | (image[2 * i + 1] << 8));
        words_[i] = unpack_word(bits);
    }
}

} // namespace scnn
