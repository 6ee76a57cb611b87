#include "esnoise/cli/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "esnoise/cli/csv.hpp"
#include "esnoise/cli/svg.hpp"
#include "esnoise/kernels.hpp"
#include "esnoise/stats.hpp"

namespace esnoise::cli {

namespace {

constexpr const char* kPerPointHeaderT[] = {"mode", "alpha", "gamma", "zeta",
                                            "t",    "mean",  "dispersion", "snr"};
constexpr const char* kPerPointHeaderX[] = {"mode", "alpha", "gamma", "zeta",
                                            "x_in", "mean",  "dispersion", "snr"};

std::string gamma_tag(double g) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", g);
    return buf;
}

struct Emitter {
    const RunConfig& cfg;
    std::filesystem::path dir;
    std::vector<std::filesystem::path> artifacts;

    bool want_csv() const { return cfg.emit == "csv" || cfg.emit == "both"; }
    bool want_svg() const { return cfg.emit == "svg" || cfg.emit == "both"; }

    void csv(const Table& table, const std::string& name) {
        if (!want_csv()) return;
        const auto path = dir / (name + ".csv");
        emit_csv(table, path);
        artifacts.push_back(path);
    }
    void svg(const std::vector<Series>& series, const ChartMeta& meta,
             const std::string& name) {
        if (!want_svg()) return;
        const auto path = dir / (name + ".svg");
        emit_svg(series, meta, path);
        artifacts.push_back(path);
    }
};

Table per_point_table(bool x_axis) {
    Table t;
    const auto& h = x_axis ? kPerPointHeaderX : kPerPointHeaderT;
    t.header.assign(std::begin(h), std::end(h));
    return t;
}

void append_stats_rows(Table& table, NoiseMode mode, double alpha, double gamma,
                       int zeta, const std::vector<double>& axis,
                       const EnsembleStats& st) {
    for (size_t t = 0; t < axis.size(); ++t) {
        table.rows.push_back({std::string(to_string(mode)), alpha, gamma,
                              double(zeta), axis[t], st.mean[t],
                              st.dispersion[t], st.snr[t]});
    }
}

std::vector<double> index_axis(size_t n) {
    std::vector<double> t(n);
    for (size_t i = 0; i < n; ++i) t[i] = double(i);
    return t;
}

SignalSpec panel_signal(const RunConfig& cfg, double gamma) {
    if (cfg.is_explicit("signal")) return cfg.signal_spec();
    RunConfig tmp = cfg;
    tmp.signal = gamma == 0.0 ? "uniform" : "sine";
    return tmp.signal_spec();
}

constexpr NoiseMode kModes[] = {NoiseMode::Additive, NoiseMode::Multiplicative,
                                NoiseMode::Mixed};
constexpr NoiseMode kEsnModes[] = {NoiseMode::Additive,
                                   NoiseMode::Multiplicative};

void scenario_one_neuron(const RunConfig& cfg, Emitter& em) {
    const SignalSpec sig = cfg.signal_spec();
    const std::vector<double> input = materialize(sig);
    Table table = per_point_table(true);
    std::vector<Series> disp_series, snr_series;
    double worst_dev = 0.0;
    for (NoiseMode mode : kModes) {
        const NoiseSpec spec = with_mode(cfg.noise_spec(), mode);
        const SimConfig sim =
            single_neuron_config(cfg.alpha, spec, sig, cfg.seed);
        const EnsembleStats st = ensemble(sim, cfg.trials, cfg.threads);
        append_stats_rows(table, mode, cfg.alpha, 0.0, -1, input, st);
        disp_series.push_back({to_string(mode), st.mean, st.dispersion, true});
        snr_series.push_back({to_string(mode), st.mean, st.snr, true});
        for (size_t t = 0; t < input.size(); ++t) {
            const double predicted =
                predict_variance_single(spec, Activation{cfg.alpha}, input[t]);
            worst_dev = std::max(worst_dev,
                                 std::fabs(st.dispersion[t] - predicted));
        }
    }
    std::cout << "one_neuron: max |dispersion - closed form| = " << worst_dev
              << "\n";
    em.csv(table, "one_neuron_dispersion");
    em.csv(table, "one_neuron_snr");
    em.svg(disp_series, {"one neuron: output dispersion", "mean output",
                         "dispersion"},
           "one_neuron_dispersion");
    em.svg(snr_series, {"one neuron: output SNR", "mean output", "SNR"},
           "one_neuron_snr");
}

void scenario_alpha_sweep(const RunConfig& cfg, Emitter& em) {
    const auto cells = sweep_alpha_input(cfg.alpha_grid, cfg.x_grid,
                                         cfg.noise_spec(), cfg.trials, cfg.seed,
                                         cfg.threads);
    for (NoiseMode mode : kModes) {
        Table table = per_point_table(true);
        std::vector<Series> disp_series, snr_series;
        for (double a : cfg.alpha_grid) {
            Series d{"alpha=" + gamma_tag(a), {}, {}, false};
            Series s{"alpha=" + gamma_tag(a), {}, {}, false};
            for (const auto& c : cells) {
                if (c.mode != mode || c.alpha != a) continue;
                table.rows.push_back({std::string(to_string(mode)), c.alpha,
                                      0.0, -1.0, c.x_in, c.mean, c.dispersion,
                                      c.snr});
                d.x.push_back(c.x_in);
                d.y.push_back(c.dispersion);
                s.x.push_back(c.x_in);
                s.y.push_back(c.snr);
            }
            disp_series.push_back(std::move(d));
            snr_series.push_back(std::move(s));
        }
        const std::string tag = to_string(mode);
        em.csv(table, "alpha_sweep_" + tag + "_dispersion");
        em.csv(table, "alpha_sweep_" + tag + "_snr");
        em.svg(disp_series,
               {"one neuron dispersion, " + tag + " noise", "x_in",
                "dispersion"},
               "alpha_sweep_" + tag + "_dispersion");
        em.svg(snr_series,
               {"one neuron SNR, " + tag + " noise", "x_in", "SNR"},
               "alpha_sweep_" + tag + "_snr");
    }
}

void scenario_esn_uniform(const RunConfig& cfg, Emitter& em) {
    bool sine_used = false;
    for (double g : cfg.gamma_grid) {
        const SignalSpec sig = panel_signal(cfg, g);
        sine_used |= sig.kind == SignalSpec::Kind::Sine;
        const std::vector<double> input = materialize(sig);
        const std::vector<double> axis = index_axis(input.size());

        SimConfig sim;
        sim.params = EsnParams{cfg.n_reservoir, 1.0 - g, g, Activation{cfg.alpha}};
        sim.signal = sig;
        sim.topology = uniform_matrix(cfg.n_reservoir);
        sim.seed = cfg.seed;

        Table table = per_point_table(false);
        std::vector<Series> disp_series;
        double worst_dev = 0.0;
        for (NoiseMode mode : kEsnModes) {
            sim.noise = with_mode(cfg.noise_spec(), mode);
            const EnsembleStats st = ensemble(sim, cfg.trials, cfg.threads);
            append_stats_rows(table, mode, cfg.alpha, g, -1, axis, st);
            disp_series.push_back(
                {to_string(mode), g == 0.0 ? st.mean : axis, st.dispersion,
                 g == 0.0});
            if (g == 0.0) {
                for (size_t t = 0; t < input.size(); ++t) {
                    const double predicted = predict_variance_esn_no_memory(
                        sim.noise, sim.params, input[t]);
                    worst_dev = std::max(
                        worst_dev, std::fabs(st.dispersion[t] - predicted));
                }
            }
        }
        if (g == 0.0)
            std::cout << "esn_uniform gamma=0: max |dispersion - closed form| = "
                      << worst_dev << "\n";
        const std::string tag = "esn_uniform_gamma" + gamma_tag(g);
        em.csv(table, tag + "_dispersion");
        em.svg(disp_series,
               {"ESN dispersion, uniform matrix, gamma=" + gamma_tag(g),
                g == 0.0 ? "mean output" : "t", "dispersion"},
               tag + "_dispersion");
    }
    if (sine_used && !cfg.is_explicit("signal")) {
        RunConfig tmp = cfg;
        tmp.signal = "sine";
        const std::vector<double> input = materialize(tmp.signal_spec());
        const std::vector<double> axis = index_axis(input.size());
        Table table;
        table.header = {"t", "x_in"};
        for (size_t t = 0; t < input.size(); ++t)
            table.rows.push_back({double(t), input[t]});
        em.csv(table, "esn_uniform_input_sine");
        em.svg({Series{"x_in", axis, input, false}},
               {"input signal", "t", "x_in"}, "esn_uniform_input_sine");
    }
}

void scenario_gamma_sweep(const RunConfig& cfg, Emitter& em) {
    SimConfig base;
    base.params = cfg.esn_params();
    base.noise = cfg.noise_spec();
    base.signal = cfg.signal_spec();
    base.topology = uniform_matrix(cfg.n_reservoir);
    base.seed = cfg.seed;
    const auto points = sweep_gamma(base, cfg.gamma_grid, cfg.trials,
                                    cfg.transient_discard, cfg.threads);

    Table table;
    table.header = {"gamma", "additive_level", "mul_min", "mul_max"};
    Series lvl{"additive level", {}, {}, false};
    Series lo{"mul min", {}, {}, false};
    Series hi{"mul max", {}, {}, false};
    for (const auto& p : points) {
        table.rows.push_back({p.gamma, p.additive_level, p.mul_min, p.mul_max});
        lvl.x.push_back(p.gamma);
        lvl.y.push_back(p.additive_level);
        lo.x.push_back(p.gamma);
        lo.y.push_back(p.mul_min);
        hi.x.push_back(p.gamma);
        hi.y.push_back(p.mul_max);
    }
    em.csv(table, "gamma_sweep");
    em.svg({lvl, lo, hi},
           {"dispersion vs gamma, uniform matrix", "gamma", "dispersion"},
           "gamma_sweep");
}

void scenario_esn_diagonal(const RunConfig& cfg, Emitter& em) {
    const SignalSpec sig = cfg.signal_spec();
    const std::vector<double> input = materialize(sig);
    const std::vector<double> axis = index_axis(input.size());
    for (int z : cfg.zeta_grid) {
        const ReservoirTopology topo = diagonal_blurred_matrix(
            cfg.n_reservoir, z, cfg.blur_kernel(), cfg.boundary_mode());
        if (em.want_csv()) {
            const auto path = em.dir / ("matrix_zeta" + std::to_string(z) + ".csv");
            std::ofstream os(path, std::ios::binary);
            if (!os) throw IOError("cannot open " + path.string());
            write_matrix_csv(topo, os);
            em.artifacts.push_back(path);
        }

        SimConfig sim;
        sim.params = cfg.esn_params();
        sim.signal = sig;
        sim.topology = topo;
        sim.seed = cfg.seed;
        Table table = per_point_table(false);
        std::vector<Series> disp_series;
        for (NoiseMode mode : kEsnModes) {
            sim.noise = with_mode(cfg.noise_spec(), mode);
            const EnsembleStats st = ensemble(sim, cfg.trials, cfg.threads);
            append_stats_rows(table, mode, cfg.alpha, cfg.gamma, z, axis, st);
            disp_series.push_back({to_string(mode), axis, st.dispersion, false});
        }
        const std::string tag = "esn_diagonal_zeta" + std::to_string(z);
        em.csv(table, tag + "_dispersion");
        em.svg(disp_series,
               {"ESN dispersion, diagonal matrix zeta=" + std::to_string(z) +
                    ", gamma=" + gamma_tag(cfg.gamma),
                "t", "dispersion"},
               tag + "_dispersion");
    }
}

void scenario_zeta_compare(const RunConfig& cfg, Emitter& em) {
    for (int z : cfg.zeta_grid) {
        SimConfig base;
        base.params = cfg.esn_params();
        base.noise = cfg.noise_spec();
        base.signal = cfg.signal_spec();
        base.topology = diagonal_blurred_matrix(cfg.n_reservoir, z,
                                                cfg.blur_kernel(),
                                                cfg.boundary_mode());
        base.seed = cfg.seed;
        const auto points = sweep_gamma(base, cfg.gamma_grid, cfg.trials,
                                        cfg.transient_discard, cfg.threads);
        Table table;
        table.header = {"gamma", "additive_level", "mul_min", "mul_max"};
        Series lvl{"additive level", {}, {}, false};
        Series lo{"mul min", {}, {}, false};
        Series hi{"mul max", {}, {}, false};
        for (const auto& p : points) {
            table.rows.push_back(
                {p.gamma, p.additive_level, p.mul_min, p.mul_max});
            lvl.x.push_back(p.gamma);
            lvl.y.push_back(p.additive_level);
            lo.x.push_back(p.gamma);
            lo.y.push_back(p.mul_min);
            hi.x.push_back(p.gamma);
            hi.y.push_back(p.mul_max);
        }
        const std::string tag = "zeta_compare_zeta" + std::to_string(z);
        em.csv(table, tag);
        em.svg({lvl, lo, hi},
               {"dispersion vs gamma, zeta=" + std::to_string(z), "gamma",
                "dispersion"},
               tag);
    }
}

}  // namespace

ScenarioName scenario_from_string(const std::string& name) {
    if (name == "one_neuron") return ScenarioName::OneNeuron;
    if (name == "one_neuron_alpha_sweep") return ScenarioName::OneNeuronAlphaSweep;
    if (name == "esn_uniform") return ScenarioName::EsnUniform;
    if (name == "esn_gamma_sweep") return ScenarioName::EsnGammaSweep;
    if (name == "esn_diagonal") return ScenarioName::EsnDiagonal;
    if (name == "esn_zeta_compare") return ScenarioName::EsnZetaCompare;
    throw std::invalid_argument("unknown scenario: " + name);
}

const char* to_string(ScenarioName name) noexcept {
    switch (name) {
        case ScenarioName::OneNeuron: return "one_neuron";
        case ScenarioName::OneNeuronAlphaSweep: return "one_neuron_alpha_sweep";
        case ScenarioName::EsnUniform: return "esn_uniform";
        case ScenarioName::EsnGammaSweep: return "esn_gamma_sweep";
        case ScenarioName::EsnDiagonal: return "esn_diagonal";
        case ScenarioName::EsnZetaCompare: return "esn_zeta_compare";
    }
    return "?";
}

std::vector<std::string> scenario_names() {
    return {"one_neuron",      "one_neuron_alpha_sweep", "esn_uniform",
            "esn_gamma_sweep", "esn_diagonal",           "esn_zeta_compare"};
}

RunConfig resolve_scenario(ScenarioName name, RunConfig cfg) {
    cfg.scenario = to_string(name);
    cfg.explicit_keys.insert("scenario");
    switch (name) {
        case ScenarioName::OneNeuron:
            cfg.set_default("signal", "uniform");
            break;
        case ScenarioName::OneNeuronAlphaSweep:
            cfg.set_default("alpha_grid",
                            "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1,1.1,1.2,"
                            "1.3,1.4,1.5,1.6,1.7,1.8,1.9,2");
            cfg.set_default("x_grid",
                            "-1,-0.9,-0.8,-0.7,-0.6,-0.5,-0.4,-0.3,-0.2,-0.1,"
                            "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1");
            break;
        case ScenarioName::EsnUniform:
            cfg.set_default("topology", "uniform");
            cfg.set_default("gamma_grid", "0,0.5");
            break;
        case ScenarioName::EsnGammaSweep:
            cfg.set_default("topology", "uniform");
            cfg.set_default("signal", "sine");
            break;
        case ScenarioName::EsnDiagonal:
            cfg.set_default("topology", "diagonal");
            cfg.set_default("signal", "sine");
            cfg.set_default("gamma", "0.8");
            break;
        case ScenarioName::EsnZetaCompare:
            cfg.set_default("topology", "diagonal");
            cfg.set_default("signal", "sine");
            break;
    }
    return cfg;
}

ScenarioResult run_scenario(const RunConfig& resolved,
                            const std::filesystem::path& out_dir) {
    const ScenarioName name = scenario_from_string(resolved.scenario);
    kernels::set_active_table(resolved.simd);
    std::filesystem::create_directories(out_dir);

    Emitter em{resolved, out_dir, {}};
    switch (name) {
        case ScenarioName::OneNeuron: scenario_one_neuron(resolved, em); break;
        case ScenarioName::OneNeuronAlphaSweep:
            scenario_alpha_sweep(resolved, em);
            break;
        case ScenarioName::EsnUniform: scenario_esn_uniform(resolved, em); break;
        case ScenarioName::EsnGammaSweep:
            scenario_gamma_sweep(resolved, em);
            break;
        case ScenarioName::EsnDiagonal:
            scenario_esn_diagonal(resolved, em);
            break;
        case ScenarioName::EsnZetaCompare:
            scenario_zeta_compare(resolved, em);
            break;
    }

    Table manifest;
    manifest.header = {"key", "value"};
    for (const auto& [k, v] : resolved.manifest_entries())
        manifest.rows.push_back({k, v});
    const auto manifest_path = out_dir / "manifest.csv";
    emit_csv(manifest, manifest_path);
    em.artifacts.push_back(manifest_path);
    return ScenarioResult{std::move(em.artifacts)};
}

}  // namespace esnoise::cli
