#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scnn/harness/experiments.hpp"
#include "scnn/protocol.hpp"

namespace {

using namespace scnn;
using namespace scnn::harness;

std::vector<std::pair<double, double>> read_xy_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::vector<std::pair<double, double>> xy;
    std::string line;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
            continue;
        }
        try {
            xy.emplace_back(std::stod(a), std::stod(b));
        } catch (const std::exception &) {
            // header or malformed line
        }
    }
    return xy;
}

int hex_digit(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::vector<std::uint8_t> parse_hex(const std::string &hex)
{
    std::vector<std::uint8_t> bytes;
    int hi = -1;
    for (char c : hex) {
        const int d = hex_digit(c);
        if (d < 0) {
            continue; // separators
        }
        if (hi < 0) {
            hi = d;
        } else {
            bytes.push_back(static_cast<std::uint8_t>((hi << 4) | d));
            hi = -1;
        }
    }
    if (hi >= 0) {
        throw std::runtime_error("odd number of hex digits");
    }
    return bytes;
}

void print_packet(const protocol::Packet &p)
{
    const auto wire = protocol::serialize(p);
    std::printf("header=0x%04X payload=0x%08X wire=", p.header, p.payload);
    for (std::uint8_t b : wire) {
        std::printf("%02x", b);
    }
    std::printf("\n");
}

void print_event(const protocol::Event &ev)
{
    if (const auto *spikes = std::get_if<protocol::SpikeEvent>(&ev)) {
        std::printf("spikes:");
        for (const auto &slot : spikes->slots) {
            std::printf(" [addr=%d enable=%d]", slot.address,
                    slot.enable ? 1 : 0);
        }
        std::printf("\n");
    } else if (const auto *w = std::get_if<protocol::ConfigWriteEvent>(&ev)) {
        std::printf("config-write addr=0x%03X value=0x%08X\n", w->address,
                w->value);
    } else {
        std::printf("config-read addr=0x%03X\n",
                std::get<protocol::ConfigReadEvent>(ev).address);
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"switched-capacitor neuromorphic system emulator"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::string spec_path;
    auto *run = app.add_subcommand("run", "run an experiment spec file");
    run->add_option("spec", spec_path, "INI spec file")->required();
    run->add_option("--out", out_dir, "output directory");

    std::string exp_name;
    std::string exp_out = "out";
    auto *exp = app.add_subcommand("experiment", "run a builtin experiment");
    exp->add_option("name", exp_name, "builtin name")->required();
    exp->add_option("--out", exp_out, "output directory");

    auto *list = app.add_subcommand("list-experiments", "list builtin names");

    auto *fit = app.add_subcommand("fit", "fit a two-column CSV");
    std::string fit_kind, fit_csv;
    double win_lo = 50.0, win_hi = 150.0;
    fit->add_option("kind", fit_kind, "exp | linear")->required();
    fit->add_option("csv", fit_csv, "CSV with x,y columns")->required();
    fit->add_option("--window-lo", win_lo, "output window low (linear)");
    fit->add_option("--window-hi", win_hi, "output window high (linear)");

    auto *codec = app.add_subcommand("codec", "encode/decode packets");
    std::string codec_op, codec_arg;
    std::vector<std::string> spike_slots;
    codec->add_option("op", codec_op, "encode | decode")->required();
    codec->add_option("arg", codec_arg,
            "decode: hex string or .pkt file; encode: 'spike' | "
            "'write:ADDR:VALUE' | 'read:ADDR'");
    codec->add_option("--slot", spike_slots, "spike slot ADDR[:0|1] (up to 4)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const ExperimentSpec spec = parse_spec_file(spec_path);
            const ExperimentResult res = run_spec_experiment(spec, out_dir);
            for (const std::string &a : res.artifacts) {
                std::printf("wrote %s\n", a.c_str());
            }
        } else if (*exp) {
            const ExperimentResult res =
                run_builtin_experiment(exp_name, exp_out);
            for (const std::string &a : res.artifacts) {
                std::printf("wrote %s\n", a.c_str());
            }
        } else if (*list) {
            for (const std::string &name : builtin_experiment_names()) {
                std::printf("%s\n", name.c_str());
            }
        } else if (*fit) {
            const auto xy = read_xy_csv(fit_csv);
            if (fit_kind == "exp") {
                Trace t;
                for (const auto &[x, y] : xy) {
                    t.push_back({x, y});
                }
                const ExpFit f = fit_exponential(t);
                std::printf("amplitude=%.9g tau_ms=%.9g\n", f.amplitude,
                        f.tau_ms);
            } else if (fit_kind == "linear") {
                RatePoints pts;
                for (const auto &[x, y] : xy) {
                    pts.push_back({x, y});
                }
                const LinearFit f = fit_linear_window(pts, win_lo, win_hi);
                std::printf("slope=%.9g intercept=%.9g f_on=%.9g\n", f.slope,
                        f.intercept, -f.intercept / f.slope);
            } else {
                std::fprintf(stderr, "unknown fit kind: %s\n",
                        fit_kind.c_str());
                return 2;
            }
        } else if (*codec) {
            if (codec_op == "encode") {
                if (codec_arg.rfind("write:", 0) == 0) {
                    const auto rest = codec_arg.substr(6);
                    const auto colon = rest.find(':');
                    const auto addr = static_cast<std::uint16_t>(
                            std::stoul(rest.substr(0, colon), nullptr, 0));
                    const auto value = static_cast<std::uint32_t>(
                            std::stoul(rest.substr(colon + 1), nullptr, 0));
                    print_packet(protocol::encode_config_write(addr, value));
                } else if (codec_arg.rfind("read:", 0) == 0) {
                    const auto addr = static_cast<std::uint16_t>(
                            std::stoul(codec_arg.substr(5), nullptr, 0));
                    print_packet(protocol::encode_config_read(addr));
                } else { // spike
                    protocol::SpikeSlots slots{};
                    for (std::size_t i = 0;
                         i < spike_slots.size() && i < 4; ++i) {
                        const std::string &s = spike_slots[i];
                        const auto colon = s.find(':');
                        slots[i].address =
                            std::stoi(s.substr(0, colon));
                        slots[i].enable =
                            colon == std::string::npos ||
                            s.substr(colon + 1) != "0";
                    }
                    print_packet(protocol::encode_input_spikes(slots));
                }
            } else if (codec_op == "decode") {
                std::vector<std::uint8_t> bytes;
                std::ifstream file(codec_arg, std::ios::binary);
                if (file) {
                    bytes.assign(std::istreambuf_iterator<char>(file),
                            std::istreambuf_iterator<char>());
                } else {
                    bytes = parse_hex(codec_arg);
                }
                for (const auto &p : protocol::deserialize_stream(bytes)) {
                    print_event(protocol::decode_packet(p));
                }
            } else {
                std::fprintf(stderr, "unknown codec op: %s\n", codec_op.c_str());
                return 2;
            }
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
