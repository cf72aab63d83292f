#include "scnn/harness/experiments.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "scnn/harness/svg.hpp"

namespace scnn::harness {

namespace {

constexpr double kappa = 15.0 / 16.0;

double tau_ms_of(int code, TickGranularity g)
{
    const auto tau = tau_from_divider(code, g);
    return tau ? *tau : 0.0;
}

void parallel_for(int n, const std::function<void(int)> &body)
{
    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = std::max(1, std::min<int>(n, hw ? static_cast<int>(hw) : 2));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                body(i);
            }
        });
    }
    for (std::thread &t : pool) {
        t.join();
    }
}

std::string hex64(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<std::pair<double, double>> trace_xy(const Trace &t)
{
    std::vector<std::pair<double, double>> xy;
    xy.reserve(t.size());
    for (const TracePoint &p : t) {
        xy.emplace_back(p.t_ms, p.value);
    }
    return xy;
}

std::vector<std::pair<double, double>> rate_xy(const RatePoints &pts)
{
    std::vector<std::pair<double, double>> xy;
    xy.reserve(pts.size());
    for (const RatePoint &p : pts) {
        xy.emplace_back(p.input_hz, p.output_hz);
    }
    return xy;
}

// least-squares amplitude for value ~ c * shape(t)
double fit_amplitude(const Trace &t, const std::function<double(double)> &shape)
{
    double sxy = 0, sxx = 0;
    for (const TracePoint &p : t) {
        const double x = shape(p.t_ms);
        sxy += x * p.value;
        sxx += x * x;
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

void summarize(ExperimentResult &res, const std::string &key, double value)
{
    res.fit_summary.emplace_back(key, value);
    std::printf("  %-36s %.6g\n", key.c_str(), value);
}

std::string out_path(const std::string &dir, const std::string &file)
{
    return (std::filesystem::path(dir) / file).string();
}

} // namespace

std::string csv_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_csv(const std::string &path, const std::string &header,
        const std::vector<std::string> &rows)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << header << "\n";
    for (const std::string &row : rows) {
        out << row << "\n";
    }
}

ProbeRecording record_run(Engine &engine, const SpikeTrain &train,
        const std::vector<int> &rows, std::uint64_t cycles)
{
    ProbeRecording rec;
    rec.probe_a.reserve(cycles);
    rec.probe_b.reserve(cycles);
    rec.fired.reserve(cycles);
    TrainFeeder feeder(train);
    for (std::uint64_t c = 0; c < cycles; ++c) {
        if (feeder.due(c)) {
            engine.latch_inputs(rows);
        }
        const std::uint64_t fired = engine.step_cycle();
        const double t = static_cast<double>(engine.cycle()) * bio_cycle_ms;
        rec.probe_a.push_back({t, engine.probe_value(0).mv()});
        rec.probe_b.push_back({t, engine.probe_value(1).mv()});
        rec.fired.push_back(fired);
    }
    return rec;
}

double measure_output_rate(Engine &engine, const SpikeTrain &train,
        const std::vector<int> &rows, int column, double duration_s)
{
    const std::uint64_t cycles =
        static_cast<std::uint64_t>(duration_s * 1000.0 / bio_cycle_ms);
    TrainFeeder feeder(train);
    std::uint64_t fires = 0;
    const std::uint64_t mask = std::uint64_t{1} << column;
    for (std::uint64_t c = 0; c < cycles; ++c) {
        if (feeder.due(c)) {
            engine.latch_inputs(rows);
        }
        if (engine.step_cycle() & mask) {
            ++fires;
        }
    }
    return static_cast<double>(fires) / duration_s;
}

double measure_output_rate(Engine &engine, double rate_hz,
        const std::vector<int> &rows, int column, double duration_s)
{
    SpikeTrain train;
    if (rate_hz > 0.0) {
        const int count = static_cast<int>(rate_hz * duration_s) + 2;
        train = gen_regular_train(rate_hz, count);
    }
    return measure_output_rate(engine, train, rows, column, duration_s);
}

RatePoints measure_transfer(const std::function<Engine()> &make_engine,
        const std::vector<double> &rates_hz, const std::vector<int> &rows,
        int column, double duration_s, bool poisson, std::uint64_t seed_base)
{
    RatePoints points(rates_hz.size());
    parallel_for(static_cast<int>(rates_hz.size()), [&](int i) {
        Engine engine = make_engine();
        const double rate = rates_hz[static_cast<std::size_t>(i)];
        double measured;
        if (poisson && rate > 0.0) {
            const SpikeTrain train = gen_poisson_train(rate,
                    duration_s * 1000.0,
                    seed_base + static_cast<std::uint64_t>(i));
            measured = measure_output_rate(engine, train, rows, column,
                    duration_s);
        } else {
            measured =
                measure_output_rate(engine, rate, rows, column, duration_s);
        }
        points[static_cast<std::size_t>(i)] = {rate, measured};
    });
    return points;
}

// --- builtin experiments ----------------------------------------------------

namespace {

ExperimentSpec psc_waveform_spec()
{
    ExperimentSpec s;
    s.name = "fig5-psc";
    s.u_code = 63;
    s.alpha_code = 0;
    s.tau_u_code = 0;
    s.tau_psc_code = 10; // ~12 ms
    s.gain_code = 89;
    s.thresh_code = 127; // keep the neuron quiet
    s.weight = 15;
    s.stimulus_kind = "regular";
    s.rate_hz = 1.0;
    s.count = 1;
    s.start_cycle = 5;
    s.duration_cycles = 400;
    s.probe_a = {ProbeKind::Psc, 0};
    s.probe_b = {ProbeKind::Vmem, 0};
    return s;
}

ExperimentResult run_fig5_psc(const std::string &dir)
{
    ExperimentResult res;
    res.name = "fig5-psc";
    ExperimentSpec s = psc_waveform_spec();
    Engine engine = s.make_engine();
    const SpikeTrain train = gen_regular_train(s.rate_hz, s.count, s.start_cycle);
    const ProbeRecording rec = record_run(engine, train, s.rows, s.duration_cycles);

    const double tau = tau_ms_of(s.tau_psc_code, TickGranularity::PerEighthCycle);
    const double t_spike = static_cast<double>(s.start_cycle + 1) * bio_cycle_ms;
    Trace tail;
    for (const TracePoint &p : rec.probe_a) {
        if (p.t_ms >= t_spike && p.value > 0.05) {
            tail.push_back(p);
        }
    }
    const ExpFit fit = fit_exponential(tail);
    const double amp = fit_amplitude(tail, [&](double t) {
        return std::exp(-(t - t_spike) / tau);
    });

    std::vector<std::string> rows;
    rows.reserve(rec.probe_a.size());
    for (const TracePoint &p : rec.probe_a) {
        rows.push_back(csv_num(p.t_ms) + "," + csv_num(p.value));
    }
    const std::string csv = out_path(dir, "fig5_psc_trace.csv");
    write_csv(csv, "t_ms,v_psc_mv", rows);
    res.artifacts.push_back(csv);

    std::vector<std::pair<double, double>> nominal;
    for (const TracePoint &p : tail) {
        nominal.emplace_back(p.t_ms, amp * std::exp(-(p.t_ms - t_spike) / tau));
    }
    SvgPlot plot("Single PSC waveform", "time [ms]", "V_psc [mV]");
    plot.add_series("measured", trace_xy(rec.probe_a));
    plot.add_series("nominal exp", nominal, "#2ca02c", true);
    const std::string svg = out_path(dir, "fig5_psc.svg");
    plot.write(svg);
    res.artifacts.push_back(svg);

    res.traces["psc"] = rec.probe_a;
    summarize(res, "tau_psc_configured_ms", tau);
    summarize(res, "tau_psc_fitted_ms", fit.tau_ms);
    summarize(res, "fitted_amplitude_mv", amp);
    return res;
}

ExperimentResult run_fig5_psp(const std::string &dir)
{
    ExperimentResult res;
    res.name = "fig5-psp";
    ExperimentSpec s = psc_waveform_spec();
    s.name = "fig5-psp";
    s.tau_m_code = 10; // tau_mem = tau_psc ~ 12 ms
    Engine engine = s.make_engine();
    const SpikeTrain train = gen_regular_train(s.rate_hz, s.count, s.start_cycle);
    const ProbeRecording rec = record_run(engine, train, s.rows, s.duration_cycles);

    const double tau = tau_ms_of(s.tau_m_code, TickGranularity::PerEighthCycle);
    const double t_spike = static_cast<double>(s.start_cycle + 1) * bio_cycle_ms;
    const Trace binned = bin_average(rec.probe_b, 0.3);
    const auto alpha_shape = [&](double t) {
        const double x = (t - t_spike) / tau;
        return x > 0 ? x * std::exp(-x) : 0.0;
    };
    const double amp = fit_amplitude(binned, alpha_shape);
    double peak = 0, rss = 0;
    for (const TracePoint &p : binned) {
        peak = std::max(peak, p.value);
        const double e = p.value - amp * alpha_shape(p.t_ms);
        rss += e * e;
    }
    const double rms = std::sqrt(rss / static_cast<double>(binned.size()));

    std::vector<std::string> rows;
    for (std::size_t i = 0; i < rec.probe_b.size(); ++i) {
        rows.push_back(csv_num(rec.probe_b[i].t_ms) + "," +
                       csv_num(rec.probe_a[i].value) + "," +
                       csv_num(rec.probe_b[i].value));
    }
    const std::string csv = out_path(dir, "fig5_psp_trace.csv");
    write_csv(csv, "t_ms,v_psc_mv,v_mem_mv", rows);
    res.artifacts.push_back(csv);

    std::vector<std::pair<double, double>> nominal;
    for (const TracePoint &p : binned) {
        nominal.emplace_back(p.t_ms, amp * alpha_shape(p.t_ms));
    }
    SvgPlot plot("Single PSP (alpha shape)", "time [ms]", "V_mem [mV]");
    plot.add_series("measured", trace_xy(rec.probe_b));
    plot.add_series("nominal alpha", nominal, "#2ca02c", true);
    const std::string svg = out_path(dir, "fig5_psp.svg");
    plot.write(svg);
    res.artifacts.push_back(svg);

    res.traces["psp"] = rec.probe_b;
    summarize(res, "tau_configured_ms", tau);
    summarize(res, "peak_mv", peak);
    summarize(res, "alpha_rms_over_peak", peak > 0 ? rms / peak : 0.0);
    return res;
}

ExperimentSpec depression_spec()
{
    ExperimentSpec s;
    s.name = "fig6-depression";
    s.u_code = 61;    // U ~ 0.96
    s.alpha_code = 32; // alpha = 0.5
    s.tau_u_code = divider_from_tau(10.0, TickGranularity::PerCycle);
    s.tau_r_code = divider_from_tau(490.0, TickGranularity::PerCycle);
    s.tau_psc_code = divider_from_tau(13.0, TickGranularity::PerEighthCycle);
    s.tau_m_code = divider_from_tau(1.2, TickGranularity::PerEighthCycle);
    s.gain_code = 89;
    s.thresh_code = 127;
    s.weight = 15;
    s.stimulus_kind = "regular";
    s.rate_hz = 50.0;
    s.count = 10;
    s.duration_cycles = 600;
    return s;
}

// PSC trace of the continuous-time model with the code-realized taus,
// sampled per cycle (overlay for the depressing/facilitating figures).
std::vector<std::pair<double, double>> nominal_psc_overlay(
        const ExperimentSpec &s, const SpikeTrain &train, std::uint64_t cycles)
{
    const double u_step = s.u_code / 64.0;
    const double alpha = s.alpha_code / 64.0;
    const double gain = quantize_dac(s.gain_code).mv();
    const double tau_u = tau_ms_of(s.tau_u_code, TickGranularity::PerCycle);
    const double tau_r = tau_ms_of(s.tau_r_code, TickGranularity::PerCycle);
    const double tau_p = tau_ms_of(s.tau_psc_code, TickGranularity::PerEighthCycle);
    double u = 0, r = 1, v = 0;
    std::vector<std::pair<double, double>> out;
    std::size_t next = 0;
    for (std::uint64_t c = 0; c < cycles; ++c) {
        if (next < train.size() && train[next] == c) {
            ++next;
            u += u_step * (1 - u);
            const double a = u * r;
            r *= 1 - alpha * u;
            v = std::min(v + gain * a, 250.0);
        }
        if (tau_u > 0) {
            u *= std::exp(-bio_cycle_ms / tau_u);
        }
        if (tau_r > 0) {
            r = 1 - (1 - r) * std::exp(-bio_cycle_ms / tau_r);
        }
        v *= std::exp(-bio_cycle_ms / tau_p);
        out.emplace_back(static_cast<double>(c + 1) * bio_cycle_ms, v);
    }
    return out;
}

ExperimentResult run_stp_trace(const ExperimentSpec &s, const std::string &dir,
        const std::string &stem, const char *title)
{
    ExperimentResult res;
    res.name = s.name;
    Engine engine = s.make_engine();
    engine.enable_amplitude_log(0);
    const SpikeTrain train = gen_regular_train(s.rate_hz, s.count, s.start_cycle);
    const ProbeRecording rec = record_run(engine, train, s.rows, s.duration_cycles);

    std::vector<std::string> rows;
    for (const TracePoint &p : rec.probe_a) {
        rows.push_back(csv_num(p.t_ms) + "," + csv_num(p.value));
    }
    const std::string csv = out_path(dir, stem + "_trace.csv");
    write_csv(csv, "t_ms,v_psc_mv", rows);
    res.artifacts.push_back(csv);

    std::vector<std::string> amp_rows;
    for (const AmplitudeEvent &ev : engine.amplitude_log()) {
        amp_rows.push_back(csv_num(static_cast<double>(ev.cycle) * bio_cycle_ms) +
                           "," + csv_num(fx_to_mv(ev.amplitude)) + "," +
                           csv_num(fx_to_mv(ev.jump)));
    }
    const std::string amp_csv = out_path(dir, stem + "_amplitudes.csv");
    write_csv(amp_csv, "t_ms,amplitude,jump_mv", amp_rows);
    res.artifacts.push_back(amp_csv);

    SvgPlot plot(title, "time [ms]", "V_psc [mV]");
    plot.add_series("measured", trace_xy(rec.probe_a));
    plot.add_series("nominal", nominal_psc_overlay(s, train, s.duration_cycles),
            "#d62728", true);
    const std::string svg = out_path(dir, stem + ".svg");
    plot.write(svg);
    res.artifacts.push_back(svg);

    res.traces["psc"] = rec.probe_a;
    const auto &log = engine.amplitude_log();
    if (log.size() >= 2) {
        summarize(res, "A1", fx_to_mv(log[0].amplitude));
        summarize(res, "A2_over_A1",
                fx_to_mv(log[1].amplitude) / fx_to_mv(log[0].amplitude));
        summarize(res, "A_last_over_A1",
                fx_to_mv(log.back().amplitude) / fx_to_mv(log[0].amplitude));
        // residual error of rounding the stimulus onto the cycle grid
        const double realized = static_cast<double>(train.size() - 1) * 1000.0 /
                                (static_cast<double>(train.back() - train.front()) *
                                        bio_cycle_ms);
        summarize(res, "stimulus_rate_residual", realized / s.rate_hz - 1.0);
    }
    return res;
}

ExperimentResult run_fig6_relaxation(const std::string &dir)
{
    ExperimentResult res;
    res.name = "fig6-relaxation";
    ExperimentSpec s = depression_spec();
    Engine engine = s.make_engine();
    engine.enable_amplitude_log(0);

    const int depress_spikes = 10;
    const int relax_spikes = 300; // 6 s of 50 Hz probing
    const SpikeTrain train =
        gen_regular_train(s.rate_hz, depress_spikes + relax_spikes);
    TrainFeeder feeder(train);
    int spikes_sent = 0;
    bool relaxing = false;
    const std::uint64_t cycles = train.back() + 2;
    for (std::uint64_t c = 0; c < cycles; ++c) {
        if (feeder.due(c)) {
            if (spikes_sent == depress_spikes && !relaxing) {
                // adaptation switched off: alpha -> 0, synapse recovers
                PresynGroupConfig cfg = engine.presyn_group(0);
                cfg.alpha_code = 0;
                engine.set_presyn_group(0, cfg);
                relaxing = true;
            }
            engine.latch_inputs(s.rows);
            ++spikes_sent;
        }
        engine.step_cycle();
    }

    const auto &log = engine.amplitude_log();
    std::vector<std::string> rows;
    for (const AmplitudeEvent &ev : log) {
        rows.push_back(csv_num(static_cast<double>(ev.cycle) * bio_cycle_ms) +
                       "," + csv_num(fx_to_mv(ev.amplitude)));
    }
    const std::string csv = out_path(dir, "fig6_relaxation_amplitudes.csv");
    write_csv(csv, "t_ms,amplitude", rows);
    res.artifacts.push_back(csv);

    // fit the recovery deficit of the amplitude sequence
    Trace deficit;
    double a_inf = 0;
    const std::size_t n = log.size();
    for (std::size_t i = n - 20; i < n; ++i) {
        a_inf += fx_to_mv(log[i].amplitude);
    }
    a_inf /= 20.0;
    const double d0 =
        a_inf - fx_to_mv(log[static_cast<std::size_t>(depress_spikes)].amplitude);
    for (std::size_t i = static_cast<std::size_t>(depress_spikes); i < n; ++i) {
        const double d = a_inf - fx_to_mv(log[i].amplitude);
        if (d > 0.05 * d0) {
            deficit.push_back(
                    {static_cast<double>(log[i].cycle) * bio_cycle_ms, d});
        }
    }
    const ExpFit fit = fit_exponential(deficit);
    const double tau_nom = tau_ms_of(s.tau_r_code, TickGranularity::PerCycle);

    SvgPlot plot("Depression relaxation (alpha = 0)", "time [ms]", "amplitude");
    std::vector<std::pair<double, double>> amp_xy;
    for (const AmplitudeEvent &ev : log) {
        amp_xy.emplace_back(static_cast<double>(ev.cycle) * bio_cycle_ms,
                fx_to_mv(ev.amplitude));
    }
    plot.add_series("amplitudes", amp_xy);
    const std::string svg = out_path(dir, "fig6_relaxation.svg");
    plot.write(svg);
    res.artifacts.push_back(svg);

    summarize(res, "tau_r_configured_ms", tau_nom);
    summarize(res, "tau_r_fitted_ms", fit.tau_ms);
    summarize(res, "tau_r_relative_error",
            std::abs(fit.tau_ms / tau_nom - 1.0));
    return res;
}

ExperimentSpec facilitation_spec()
{
    ExperimentSpec s;
    s.name = "fig7-facilitation";
    s.u_code = 8;      // U ~ 0.13
    s.alpha_code = 55; // alpha ~ 0.86
    s.tau_u_code = divider_from_tau(490.0, TickGranularity::PerCycle);
    s.tau_r_code = divider_from_tau(10.0, TickGranularity::PerCycle);
    s.tau_psc_code = divider_from_tau(13.0, TickGranularity::PerEighthCycle);
    s.gain_code = 89;
    s.thresh_code = 127;
    s.weight = 15;
    s.stimulus_kind = "regular";
    s.rate_hz = 50.0;
    s.count = 10;
    s.duration_cycles = 600;
    return s;
}

ExperimentSpec combined_spec()
{
    ExperimentSpec s = facilitation_spec();
    s.name = "fig7-combined";
    s.u_code = 19;     // U ~ 0.29
    s.alpha_code = 32; // alpha = 0.5
    s.tau_u_code = divider_from_tau(300.0, TickGranularity::PerCycle);
    s.tau_r_code = divider_from_tau(300.0, TickGranularity::PerCycle);
    s.tau_psc_code = divider_from_tau(10.0, TickGranularity::PerEighthCycle);
    return s;
}

// shared transfer-function configuration (integrate-and-fire regime)
ExperimentSpec transfer_spec()
{
    ExperimentSpec s;
    s.name = "transfer";
    s.u_code = 63;
    s.alpha_code = 0;
    s.tau_u_code = 0;
    s.tau_psc_code = 4;
    s.gain_code = 80;
    s.tau_m_code = 0; // integrate-and-fire
    s.thresh_code = 89;
    s.reset_code = 63;
    return s;
}

ExperimentResult run_fig9_transfer(const std::string &dir)
{
    ExperimentResult res;
    res.name = "fig9-neuron-transfer";
    const std::vector<int> rows{0, 1, 2, 3, 4};
    std::vector<double> rates;
    for (double f = 10; f <= 400; f += 30) {
        rates.push_back(f);
    }
    // weight 3 on all 64 columns: every neuron sees the same 5-synapse drive
    const auto make_engine = [&] {
        ExperimentSpec s = transfer_spec();
        s.rows = rows;
        s.weight = 3;
        Engine engine = s.make_engine();
        SynapseWord w;
        w.w_ltp = w.w_ltd = 3;
        for (int r : rows) {
            for (int c = 0; c < num_neurons; ++c) {
                engine.write_synapse(r, c, w);
            }
        }
        return engine;
    };

    RatePoints mean_points(rates.size());
    std::vector<double> spread_min(rates.size()), spread_max(rates.size());
    parallel_for(static_cast<int>(rates.size()), [&](int i) {
        Engine engine = make_engine();
        const double rate = rates[static_cast<std::size_t>(i)];
        const double duration_s = 10.0;
        const std::uint64_t cycles =
            static_cast<std::uint64_t>(duration_s * 1000.0 / bio_cycle_ms);
        const int count = static_cast<int>(rate * duration_s) + 2;
        const SpikeTrain train = gen_regular_train(rate, count);
        TrainFeeder feeder(train);
        std::array<std::uint64_t, num_neurons> fires{};
        for (std::uint64_t c = 0; c < cycles; ++c) {
            if (feeder.due(c)) {
                engine.latch_inputs(rows);
            }
            std::uint64_t fired = engine.step_cycle();
            while (fired) {
                fires[static_cast<std::size_t>(std::countr_zero(fired))]++;
                fired &= fired - 1;
            }
        }
        double lo = 1e300, hi = 0, sum = 0;
        for (std::uint64_t f : fires) {
            const double r = static_cast<double>(f) / duration_s;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            sum += r;
        }
        mean_points[static_cast<std::size_t>(i)] = {rate, sum / num_neurons};
        spread_min[static_cast<std::size_t>(i)] = lo;
        spread_max[static_cast<std::size_t>(i)] = hi;
    });

    std::vector<std::string> csv_rows;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        csv_rows.push_back(csv_num(rates[i]) + "," +
                           csv_num(mean_points[i].output_hz) + "," +
                           csv_num(spread_min[i]) + "," +
                           csv_num(spread_max[i]));
    }
    const std::string csv = out_path(dir, "fig9_transfer.csv");
    write_csv(csv, "input_hz,mean_output_hz,min_output_hz,max_output_hz",
            csv_rows);
    res.artifacts.push_back(csv);

    SvgPlot plot("Neuron transfer function, leak off (all 64 neurons)",
            "input rate [Hz]", "output rate [Hz]");
    plot.add_series("mean over neurons", rate_xy(mean_points));
    const std::string svg = out_path(dir, "fig9_transfer.svg");
    plot.write(svg);
    res.artifacts.push_back(svg);

    res.sweeps["mean"] = mean_points;
    summarize(res, "max_mean_output_hz",
            mean_points.empty() ? 0.0 : mean_points.back().output_hz);
    return res;
}

ExperimentResult run_fig10_onset(const std::string &dir)
{
    ExperimentResult res;
    res.name = "fig10-onset-sweep";
    const std::vector<int> codes{6, 12, 18, 30, 62};
    const int ref_code = codes.front();
    const std::vector<int> rows{0, 1, 2, 3, 4};
    const int per_row_weight = 3;

    const auto make_engine = [&](int tau_m_code) {
        ExperimentSpec s = transfer_spec();
        s.rows = rows;
        s.weight = per_row_weight;
        s.gain_code = 72;
        s.tau_psc_code = 2;
        s.thresh_code = 76;
        s.tau_m_code = tau_m_code;
        return s.make_engine();
    };

    // sampling plan from the sub-saturation charge model
    Engine probe_engine = make_engine(ref_code);
    const double g_w = fx_to_mv(probe_engine.charge_gain());
    const double gain_mv = quantize_dac(72).mv();
    const double rho_psc = std::pow(kappa, 8.0 / 2.0);
    const double charge_per_spike =
        5.0 * per_row_weight * g_w * gain_mv / (1.0 - rho_psc);
    const double span = quantize_dac(76).mv() - quantize_dac(63).mv();
    const double gain_slope = charge_per_spike / span;

    SvgPlot plot("Transfer functions across tau_mem settings",
            "input rate [Hz]", "output rate [Hz]");
    std::vector<std::string> table;
    std::vector<std::pair<double, double>> tau_vs_fon;
    std::vector<double> products;
    for (int code : codes) {
        const double tau_m = tau_ms_of(code, TickGranularity::PerEighthCycle);
        const double scale = static_cast<double>(ref_code) / code;
        const double window_lo = 50.0 * scale;
        const double window_hi = 150.0 * scale;
        const double rho = std::pow(kappa, 8.0 / code);
        const double f_on_pred = span * (1.0 - rho) / rho /
                                 (charge_per_spike * bio_cycle_ms / 1000.0);
        const double f_max =
            f_on_pred + (window_hi + 30.0 * scale) / gain_slope;
        std::vector<double> rates;
        for (int i = 0; i < 26; ++i) {
            const double f =
                f_on_pred * 0.5 + (f_max - f_on_pred * 0.5) * i / 25.0;
            if (f > 2.0 && f < 1610.0) {
                rates.push_back(f);
            }
        }
        const RatePoints pts = measure_transfer(
                [&] { return make_engine(code); }, rates, rows, 0, 10.0);
        const double f_on = extract_onset_frequency(pts, window_lo, window_hi);
        products.push_back(f_on * tau_m);
        tau_vs_fon.emplace_back(tau_m, f_on);
        table.push_back(csv_num(code) + "," + csv_num(tau_m) + "," +
                        csv_num(f_on) + "," + csv_num(f_on * tau_m));
        plot.add_series("tau_mem " + csv_num(tau_m) + " ms", rate_xy(pts));
        res.sweeps["code" + std::to_string(code)] = pts;
    }

    const std::string csv = out_path(dir, "fig10_onset.csv");
    write_csv(csv, "tau_m_code,tau_m_ms,f_on_hz,product_ms_hz", table);
    res.artifacts.push_back(csv);
    const std::string svg = out_path(dir, "fig10_transfer.svg");
    plot.write(svg);
    res.artifacts.push_back(svg);

    SvgPlot plot2("Onset frequency vs membrane time constant", "tau_mem [ms]",
            "f_on [Hz]");
    plot2.add_series("measured", tau_vs_fon);
    const std::string svg2 = out_path(dir, "fig10_onset.svg");
    plot2.write(svg2);
    res.artifacts.push_back(svg2);

    double mean = 0;
    for (double p : products) {
        mean += p;
    }
    mean /= static_cast<double>(products.size());
    double dev = 0;
    for (double p : products) {
        dev = std::max(dev, std::abs(p / mean - 1.0));
    }
    summarize(res, "product_mean_ms_hz", mean);
    summarize(res, "product_max_rel_dev", dev);
    return res;
}

ExperimentResult run_fig11_weight_sweep(const std::string &dir)
{
    ExperimentResult res;
    res.name = "fig11-weight-sweep";
    const std::vector<int> weights{0, 1, 2, 4, 8, 12, 15};
    std::vector<double> rates{0};
    for (double f = 10; f <= 310; f += 30) {
        rates.push_back(f);
    }

    SvgPlot plot("Transfer function across synaptic weights",
            "input rate [Hz]", "output rate [Hz]");
    std::vector<std::string> csv_rows;
    for (int w : weights) {
        const auto make_engine = [&] {
            ExperimentSpec s = transfer_spec();
            s.weight = w;
            s.background_weight = 8; // unstimulated firing around 84 Hz
            return s.make_engine();
        };
        const RatePoints pts = measure_transfer(make_engine, rates, {0}, 0,
                10.0, true, 1101 + static_cast<std::uint64_t>(w) * 100);
        for (const RatePoint &p : pts) {
            csv_rows.push_back(csv_num(w) + "," + csv_num(p.input_hz) + "," +
                               csv_num(p.output_hz));
        }
        plot.add_series("w = " + std::to_string(w), rate_xy(pts));
        res.sweeps["w" + std::to_string(w)] = pts;
    }

    const std::string csv = out_path(dir, "fig11_weight_sweep.csv");
    write_csv(csv, "weight,input_hz,output_hz", csv_rows);
    res.artifacts.push_back(csv);
    const std::string svg = out_path(dir, "fig11_weight_sweep.svg");
    plot.write(svg);
    res.artifacts.push_back(svg);

    const RatePoints &bg = res.sweeps["w0"];
    summarize(res, "unstimulated_rate_hz", bg.empty() ? 0.0 : bg[0].output_hz);
    return res;
}

ExperimentResult run_fig12_weight_slopes(const std::string &dir)
{
    ExperimentResult res;
    res.name = "fig12-weight-slopes";
    std::vector<double> rates;
    for (double f = 10; f <= 100; f += 10) {
        rates.push_back(f);
    }
    std::vector<std::string> csv_rows;
    std::vector<std::pair<double, double>> slope_points;
    double slope1 = 0;
    for (int w = 1; w <= 15; ++w) {
        const auto make_engine = [&] {
            ExperimentSpec s = transfer_spec();
            s.weight = w;
            s.background_weight = 8;
            return s.make_engine();
        };
        const RatePoints pts = measure_transfer(make_engine, rates, {0}, 0,
                10.0, true, 1201 + static_cast<std::uint64_t>(w) * 100);
        std::vector<std::pair<double, double>> xy = rate_xy(pts);
        const LinearFit fit = linear_fit(xy);
        if (w == 1) {
            slope1 = fit.slope;
        }
        slope_points.emplace_back(w, fit.slope);
        csv_rows.push_back(csv_num(w) + "," + csv_num(fit.slope) + "," +
                           csv_num(slope1 != 0 ? fit.slope / slope1 : 0.0));
    }
    const std::string csv = out_path(dir, "fig12_weight_slopes.csv");
    write_csv(csv, "weight,slope,slope_over_slope1", csv_rows);
    res.artifacts.push_back(csv);

    SvgPlot plot("Frequency gain factor vs weight setting", "weight",
            "slope [Hz/Hz]");
    plot.add_series("slope", slope_points);
    const std::string svg = out_path(dir, "fig12_weight_slopes.svg");
    plot.write(svg);
    res.artifacts.push_back(svg);

    summarize(res, "slope15_over_slope1",
            slope1 != 0 ? slope_points.back().second / slope1 : 0.0);
    return res;
}

} // namespace

std::vector<std::string> builtin_experiment_names()
{
    return {"fig5-psc", "fig5-psp", "fig6-depression", "fig6-relaxation",
            "fig7-facilitation", "fig7-combined", "fig9-neuron-transfer",
            "fig10-onset-sweep", "fig11-weight-sweep", "fig12-weight-slopes"};
}

ExperimentResult run_builtin_experiment(const std::string &name,
        const std::string &out_dir)
{
    std::filesystem::create_directories(out_dir);
    std::printf("experiment %s\n", name.c_str());
    if (name == "fig5-psc") {
        return run_fig5_psc(out_dir);
    }
    if (name == "fig5-psp") {
        return run_fig5_psp(out_dir);
    }
    if (name == "fig6-depression") {
        return run_stp_trace(depression_spec(), out_dir, "fig6_depression",
                "Depressing synapse, 10 spikes at 50 Hz");
    }
    if (name == "fig6-relaxation") {
        return run_fig6_relaxation(out_dir);
    }
    if (name == "fig7-facilitation") {
        return run_stp_trace(facilitation_spec(), out_dir, "fig7_facilitation",
                "Facilitating synapse, 10 spikes at 50 Hz");
    }
    if (name == "fig7-combined") {
        return run_stp_trace(combined_spec(), out_dir, "fig7_combined",
                "Combined facilitation and depression");
    }
    if (name == "fig9-neuron-transfer") {
        return run_fig9_transfer(out_dir);
    }
    if (name == "fig10-onset-sweep") {
        return run_fig10_onset(out_dir);
    }
    if (name == "fig11-weight-sweep") {
        return run_fig11_weight_sweep(out_dir);
    }
    if (name == "fig12-weight-slopes") {
        return run_fig12_weight_slopes(out_dir);
    }
    throw std::invalid_argument("unknown experiment: " + name);
}

ExperimentResult run_spec_experiment(const ExperimentSpec &spec,
        const std::string &out_dir)
{
    spec.validate();
    std::filesystem::create_directories(out_dir);
    ExperimentResult res;
    res.name = spec.name;

    if (!spec.sweep_axis.empty()) {
        if (spec.sweep_axis != "weight" && spec.sweep_axis != "tau_m_code" &&
            spec.sweep_axis != "rate") {
            throw std::invalid_argument(
                "unknown sweep axis: " + spec.sweep_axis);
        }
        std::vector<double> rates = spec.sweep_rates_hz;
        if (rates.empty()) {
            for (double f = 10; f <= 310; f += 30) {
                rates.push_back(f);
            }
        }
        std::vector<double> values = spec.sweep_values;
        if (values.empty()) {
            values.push_back(spec.sweep_axis == "weight" ? spec.weight
                                                         : spec.tau_m_code);
        }
        SvgPlot plot(spec.name, "input rate [Hz]", "output rate [Hz]");
        std::vector<std::string> csv_rows;
        for (double v : values) {
            ExperimentSpec point = spec;
            if (spec.sweep_axis == "weight") {
                point.weight = static_cast<int>(v);
            } else if (spec.sweep_axis == "tau_m_code") {
                point.tau_m_code = static_cast<int>(v);
            }
            point.validate();
            const auto make_engine = [&point] { return point.make_engine(); };
            const RatePoints pts = measure_transfer(make_engine, rates,
                    spec.rows, spec.column, spec.sweep_duration_s);
            const std::string label = spec.sweep_axis + "=" + csv_num(v);
            for (const RatePoint &p : pts) {
                csv_rows.push_back(csv_num(v) + "," + csv_num(p.input_hz) +
                                   "," + csv_num(p.output_hz));
            }
            plot.add_series(label, rate_xy(pts));
            res.sweeps[label] = pts;
            if (spec.sweep_axis == "rate") {
                break; // single config, rates are the axis
            }
        }
        const std::string csv = out_path(out_dir, spec.name + "_sweep.csv");
        write_csv(csv, "value,input_hz,output_hz", csv_rows);
        res.artifacts.push_back(csv);
        const std::string svg = out_path(out_dir, spec.name + "_sweep.svg");
        plot.write(svg);
        res.artifacts.push_back(svg);
        return res;
    }

    Engine engine = spec.make_engine();
    SpikeTrain train;
    if (spec.stimulus_kind == "regular") {
        train = gen_regular_train(spec.rate_hz, spec.count, spec.start_cycle);
    } else if (spec.stimulus_kind == "poisson") {
        train = gen_poisson_train(spec.rate_hz, spec.duration_ms, spec.seed);
    }
    const ProbeRecording rec =
        record_run(engine, train, spec.rows, spec.duration_cycles);

    std::vector<std::string> rows;
    for (std::size_t i = 0; i < rec.probe_a.size(); ++i) {
        rows.push_back(csv_num(static_cast<double>(i)) + "," +
                       csv_num(rec.probe_a[i].value) + "," +
                       csv_num(rec.probe_b[i].value) + "," +
                       hex64(rec.fired[i]));
    }
    const std::string csv = out_path(out_dir, spec.name + "_trace.csv");
    write_csv(csv, "cycle,probe_a_mv,probe_b_mv,fired_hex", rows);
    res.artifacts.push_back(csv);

    Trace a = rec.probe_a, b = rec.probe_b;
    if (spec.bin_ms > 0) {
        a = bin_average(a, spec.bin_ms);
        b = bin_average(b, spec.bin_ms);
    }
    SvgPlot plot(spec.name, "time [ms]", "probe [mV]");
    plot.add_series("probe A", trace_xy(a));
    plot.add_series("probe B", trace_xy(b), "#d62728");
    const std::string svg = out_path(out_dir, spec.name + "_trace.svg");
    plot.write(svg);
    res.artifacts.push_back(svg);
    res.traces["probe_a"] = rec.probe_a;
    res.traces["probe_b"] = rec.probe_b;
    return res;
}

} // namespace scnn::harness
