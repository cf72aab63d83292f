#include "scnn/harness/spec.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scnn::harness {

int dac_code_from_mv(double mv)
{
    const int code = static_cast<int>(std::llround((mv + 250.0) * 127.0 / 500.0));
    return code < 0 ? 0 : (code > 127 ? 127 : code);
}

void ExperimentSpec::validate() const
{
    validate_divider_code(tau_u_code);
    validate_divider_code(tau_r_code);
    validate_divider_code(tau_psc_code);
    validate_divider_code(tau_m_code);
    validate_dac_code(gain_code);
    validate_dac_code(thresh_code);
    validate_dac_code(reset_code);
    validate_dac_code(v_bg_code);
    if (u_code < 0 || u_code > 63 || alpha_code < 0 || alpha_code > 63) {
        throw std::out_of_range("U/alpha code out of range");
    }
    if (divider < 1 || divider > 255) {
        throw std::out_of_range("clock divider out of range");
    }
    if (weight < 0 || weight > 15 || background_weight < 0 ||
        background_weight > 15) {
        throw std::out_of_range("weight out of range");
    }
    if (column < 0 || column >= num_neurons) {
        throw std::out_of_range("column out of range");
    }
    for (int r : rows) {
        if (r < 0 || r >= background_row) {
            throw std::out_of_range("stimulated row out of range");
        }
    }
    if (stimulus_kind != "none" && stimulus_kind != "regular" &&
        stimulus_kind != "poisson") {
        throw std::invalid_argument("unknown stimulus kind: " + stimulus_kind);
    }
}

Engine ExperimentSpec::make_engine() const
{
    validate();
    Engine engine;
    engine.set_clock_divider(divider);
    PresynGroupConfig pg;
    pg.u_code = u_code;
    pg.alpha_code = alpha_code;
    pg.tau_u_code = tau_u_code;
    pg.tau_r_code = tau_r_code;
    pg.tau_psc_code = tau_psc_code;
    pg.v_psc_gain = DacValue{gain_code};
    for (int g = 0; g < num_presyn_groups; ++g) {
        engine.set_presyn_group(g, pg);
    }
    NeuronGroupConfig ng;
    ng.v_thresh = DacValue{thresh_code};
    ng.v_reset = DacValue{reset_code};
    ng.tau_m_code = tau_m_code;
    for (int g = 0; g < num_neuron_groups; ++g) {
        engine.set_neuron_group(g, ng);
    }
    if (g_weight) {
        engine.set_charge_gain(fx_from_mv(*g_weight));
    }
    engine.set_background_level(DacValue{v_bg_code});
    if (background_weight > 0) {
        engine.configure_background(column, background_weight, background_sign);
    }
    SynapseWord w;
    w.w_ltp = static_cast<std::uint8_t>(weight);
    w.w_ltd = static_cast<std::uint8_t>(weight);
    w.sign = sign;
    for (int r : rows) {
        engine.write_synapse(r, column, w);
    }
    engine.set_probe(0, probe_a);
    engine.set_probe(1, probe_b);
    return engine;
}

namespace {

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string &value)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(std::stod(item));
        }
    }
    return out;
}

std::vector<int> parse_int_list(const std::string &value)
{
    std::vector<int> out;
    for (double v : parse_list(value)) {
        out.push_back(static_cast<int>(v));
    }
    return out;
}

int tau_code_from_value(const std::string &value, TickGranularity granularity)
{
    if (value == "inf" || value == "INF") {
        return 0;
    }
    return divider_from_tau(std::stod(value), granularity);
}

ProbeSelect parse_probe(const std::string &value)
{
    const auto colon = value.find(':');
    const std::string kind = colon == std::string::npos
                                 ? value
                                 : value.substr(0, colon);
    const int index = colon == std::string::npos
                          ? 0
                          : std::stoi(value.substr(colon + 1));
    if (kind == "none") {
        return {ProbeKind::None, 0};
    }
    if (kind == "psc") {
        return {ProbeKind::Psc, index};
    }
    if (kind == "vmem") {
        return {ProbeKind::Vmem, index};
    }
    throw std::invalid_argument("unknown probe kind: " + kind);
}

} // namespace

ExperimentSpec parse_spec_text(const std::string &text, const std::string &name)
{
    ExperimentSpec spec;
    spec.name = name;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of(";#");
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument(
                    "bad section header at line " + std::to_string(line_no));
            }
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(
                "expected key = value at line " + std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (section == "engine") {
                if (key == "divider") spec.divider = std::stoi(value);
                else if (key == "u") spec.u_code = static_cast<int>(std::llround(std::stod(value) * 64));
                else if (key == "u_code") spec.u_code = std::stoi(value);
                else if (key == "alpha") spec.alpha_code = static_cast<int>(std::llround(std::stod(value) * 64));
                else if (key == "alpha_code") spec.alpha_code = std::stoi(value);
                else if (key == "tau_u_ms") spec.tau_u_code = tau_code_from_value(value, TickGranularity::PerCycle);
                else if (key == "tau_u_code") spec.tau_u_code = std::stoi(value);
                else if (key == "tau_r_ms") spec.tau_r_code = tau_code_from_value(value, TickGranularity::PerCycle);
                else if (key == "tau_r_code") spec.tau_r_code = std::stoi(value);
                else if (key == "tau_psc_ms") spec.tau_psc_code = tau_code_from_value(value, TickGranularity::PerEighthCycle);
                else if (key == "tau_psc_code") spec.tau_psc_code = std::stoi(value);
                else if (key == "tau_m_ms") spec.tau_m_code = tau_code_from_value(value, TickGranularity::PerEighthCycle);
                else if (key == "tau_m_code") spec.tau_m_code = std::stoi(value);
                else if (key == "gain_mv") spec.gain_code = dac_code_from_mv(std::stod(value));
                else if (key == "gain_code") spec.gain_code = std::stoi(value);
                else if (key == "v_thresh_mv") spec.thresh_code = dac_code_from_mv(std::stod(value));
                else if (key == "v_thresh_code") spec.thresh_code = std::stoi(value);
                else if (key == "v_reset_mv") spec.reset_code = dac_code_from_mv(std::stod(value));
                else if (key == "v_reset_code") spec.reset_code = std::stoi(value);
                else if (key == "g_w") spec.g_weight = std::stod(value);
                else if (key == "rows") spec.rows = parse_int_list(value);
                else if (key == "column") spec.column = std::stoi(value);
                else if (key == "weight") spec.weight = std::stoi(value);
                else if (key == "sign") spec.sign = value == "inh" ? SynSign::Inhibitory : SynSign::Excitatory;
                else if (key == "background_weight") spec.background_weight = std::stoi(value);
                else if (key == "background_sign") spec.background_sign = value == "inh" ? SynSign::Inhibitory : SynSign::Excitatory;
                else if (key == "v_bg_mv") spec.v_bg_code = dac_code_from_mv(std::stod(value));
                else if (key == "v_bg_code") spec.v_bg_code = std::stoi(value);
                else throw std::invalid_argument("unknown [engine] key: " + key);
            } else if (section == "stimulus") {
                if (key == "kind") spec.stimulus_kind = value;
                else if (key == "rate_hz") spec.rate_hz = std::stod(value);
                else if (key == "count") spec.count = std::stoi(value);
                else if (key == "start_cycle") spec.start_cycle = std::stoull(value);
                else if (key == "duration_ms") spec.duration_ms = std::stod(value);
                else if (key == "seed") spec.seed = std::stoull(value);
                else throw std::invalid_argument("unknown [stimulus] key: " + key);
            } else if (section == "probe") {
                if (key == "a") spec.probe_a = parse_probe(value);
                else if (key == "b") spec.probe_b = parse_probe(value);
                else if (key == "duration_cycles") spec.duration_cycles = std::stoull(value);
                else if (key == "bin_ms") spec.bin_ms = std::stod(value);
                else throw std::invalid_argument("unknown [probe] key: " + key);
            } else if (section == "sweep") {
                if (key == "axis") spec.sweep_axis = value;
                else if (key == "values") spec.sweep_values = parse_list(value);
                else if (key == "rates_hz") spec.sweep_rates_hz = parse_list(value);
                else if (key == "duration_s") spec.sweep_duration_s = std::stod(value);
                else throw std::invalid_argument("unknown [sweep] key: " + key);
            } else {
                throw std::invalid_argument("unknown section: [" + section + "]");
            }
        } catch (const std::invalid_argument &) {
            throw;
        } catch (const std::exception &e) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": " + e.what());
        }
    }
    if (const char *env_seed = std::getenv("SCNN_SEED")) {
        spec.seed = std::strtoull(env_seed, nullptr, 10);
    }
    spec.validate();
    return spec;
}

ExperimentSpec parse_spec_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open spec file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string name = path;
    const auto slash = name.find_last_of("/\\");
    if (slash != std::string::npos) {
        name = name.substr(slash + 1);
    }
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos) {
        name = name.substr(0, dot);
    }
    return parse_spec_text(buffer.str(), name);
}

} // namespace scnn::harness
