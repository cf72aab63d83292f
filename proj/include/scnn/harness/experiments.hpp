#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "scnn/engine.hpp"
#include "scnn/harness/analysis.hpp"
#include "scnn/harness/spec.hpp"
#include "scnn/harness/stimulus.hpp"

namespace scnn::harness {

struct ExperimentResult {
    std::string name;
    std::map<std::string, Trace> traces;
    std::map<std::string, RatePoints> sweeps;
    std::vector<std::pair<std::string, double>> fit_summary;
    std::vector<std::string> artifacts; // paths written under out_dir
};

// Drive `engine` for `cycles`, latching `train` onto `rows`, recording the
// probe values after every cycle. Returns one trace per probe slot plus the
// fired bitmask history.
struct ProbeRecording {
    Trace probe_a;
    Trace probe_b;
    std::vector<std::uint64_t> fired;
};

ProbeRecording record_run(Engine &engine, const SpikeTrain &train,
        const std::vector<int> &rows, std::uint64_t cycles);

// Output rate of one neuron under an input train on `rows`, measured over
// `duration_s` of biological time.
double measure_output_rate(Engine &engine, const SpikeTrain &train,
        const std::vector<int> &rows, int column, double duration_s);
double measure_output_rate(Engine &engine, double rate_hz,
        const std::vector<int> &rows, int column, double duration_s);

// Sweep helper: one fresh engine per point, points run on a worker pool,
// results ordered by input rate. Poisson stimulation (seeded per point)
// avoids phase locking between a regular train and background-driven
// firing; regular trains are the default.
RatePoints measure_transfer(const std::function<Engine()> &make_engine,
        const std::vector<double> &rates_hz, const std::vector<int> &rows,
        int column, double duration_s, bool poisson = false,
        std::uint64_t seed_base = 0);

std::vector<std::string> builtin_experiment_names();

// Run a builtin by name, writing CSV/SVG artifacts under out_dir and
// printing a fit summary. Unknown names raise std::invalid_argument.
ExperimentResult run_builtin_experiment(const std::string &name,
        const std::string &out_dir);

// Run a parsed spec file (trace recording, or a sweep when [sweep] is set).
ExperimentResult run_spec_experiment(const ExperimentSpec &spec,
        const std::string &out_dir);

void write_csv(const std::string &path, const std::string &header,
        const std::vector<std::string> &rows);
std::string csv_num(double v);

} // namespace scnn::harness
