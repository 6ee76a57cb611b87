#include "esnoise/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace esnoise {

namespace {

kernels::StepMode step_mode(const NoiseSpec& spec) noexcept {
    using kernels::StepMode;
    if (spec.multiplicative_enabled)
        return spec.additive_enabled ? StepMode::Both : StepMode::MulOnly;
    return spec.additive_enabled ? StepMode::AddOnly : StepMode::None;
}

}  // namespace

void validate(const SimConfig& config) {
    validate(config.params, config.noise);
    validate(config.signal);
    if (config.topology.n != config.params.n_reservoir)
        throw DimensionMismatch("topology is " + std::to_string(config.topology.n) +
                                "x" + std::to_string(config.topology.n) +
                                " but n_reservoir is " +
                                std::to_string(config.params.n_reservoir));
}

SimConfig single_neuron_config(double alpha, const NoiseSpec& noise,
                               SignalSpec signal, uint64_t seed) {
    SimConfig cfg;
    cfg.params = EsnParams{1, 1.0, 0.0, Activation{alpha}};
    cfg.noise = noise;
    cfg.signal = std::move(signal);
    cfg.topology = uniform_matrix(1);
    cfg.seed = seed;
    return cfg;
}

ReservoirState initial_state(int n_reservoir) {
    return ReservoirState{std::vector<double>(size_t(n_reservoir), 0.0), 0};
}

double single_neuron_response(double x_in, Activation activation,
                              const NoiseSpec& spec, NoiseStream& stream) {
    return apply_noise(activation(x_in), spec, stream);
}

std::pair<ReservoirState, double> esn_step(const ReservoirState& state,
                                           double x_in_t,
                                           const EsnParams& params,
                                           const ReservoirTopology& topology,
                                           const NoiseSpec& spec,
                                           std::span<NoiseStream> streams) {
    const int n = params.n_reservoir;
    if (int(state.y_prev.size()) != n)
        throw DimensionMismatch("state has " + std::to_string(state.y_prev.size()) +
                                " entries for n_reservoir " + std::to_string(n));
    if (topology.n != n)
        throw DimensionMismatch("topology size " + std::to_string(topology.n) +
                                " vs n_reservoir " + std::to_string(n));
    if (int(streams.size()) != n)
        throw DimensionMismatch("stream set has " + std::to_string(streams.size()) +
                                " entries for n_reservoir " + std::to_string(n));

    const auto& kt = kernels::scalar_table();
    const double gamma = params.gamma;
    const double beta_x = params.beta * x_in_t;
    const double alpha = params.activation.slope;

    // Feedback gamma * (y_prev . W), skipped entirely at gamma = 0 so the
    // result cannot depend on the topology there.
    std::vector<double> fb;
    double fb_uniform = 0.0;
    const double* fb_ptr = nullptr;
    if (gamma != 0.0) {
        if (topology.kind == ReservoirTopology::Kind::Uniform) {
            fb_uniform = kt.block_sum(state.y_prev.data(), n) / n;
        } else {
            const int zeta = topology.zeta;
            std::vector<double> ypad(size_t(n) + 2 * size_t(zeta), 0.0);
            std::copy(state.y_prev.begin(), state.y_prev.end(),
                      ypad.begin() + zeta);
            if (topology.boundary == Boundary::Wrap && zeta > 0) {
                std::copy(state.y_prev.end() - zeta, state.y_prev.end(),
                          ypad.begin());
                std::copy(state.y_prev.begin(), state.y_prev.begin() + zeta,
                          ypad.end() - zeta);
            }
            fb.resize(size_t(n));
            kt.banded_matvec(ypad.data(), n, topology.taps.data(), zeta,
                             fb.data());
            fb_ptr = fb.data();
        }
    }

    ReservoirState next;
    next.y_prev.resize(size_t(n));
    next.t = state.t + 1;
    for (int j = 0; j < n; ++j) {
        const double x =
            alpha * std::fma(gamma, fb_ptr ? fb_ptr[j] : fb_uniform, beta_x);
        next.y_prev[size_t(j)] = apply_noise(x, spec, streams[size_t(j)]);
    }
    const double x_out = kt.block_sum(next.y_prev.data(), n) / n;
    return {std::move(next), x_out};
}

void run_trajectory_into(double* out, std::span<const double> input,
                         const EsnParams& params,
                         const ReservoirTopology& topology,
                         const NoiseSpec& spec, uint64_t seed, uint32_t trial,
                         TrialWorkspace& ws, const kernels::KernelTable& kt) {
    using kernels::StepMode;
    const int n = params.n_reservoir;
    if (topology.n != n)
        throw DimensionMismatch("topology size " + std::to_string(topology.n) +
                                " vs n_reservoir " + std::to_string(n));
    if (trial >= kernels::kSignalTrialId)
        throw DimensionMismatch("trial id out of range");

    const bool banded = topology.kind == ReservoirTopology::Kind::DiagonalBlurred;
    const int zeta = banded ? topology.zeta : 0;
    const bool wrap = topology.boundary == Boundary::Wrap;
    const double gamma = params.gamma;
    const double alpha = params.activation.slope;
    const StepMode mode = step_mode(spec);
    const double sigma_m =
        spec.multiplicative_enabled ? std::sqrt(spec.d_mul) : 0.0;
    const double sigma_a = spec.additive_enabled ? std::sqrt(spec.d_add) : 0.0;

    ws.ypad.assign(size_t(n) + 2 * size_t(zeta), 0.0);
    ws.lane0.resize(size_t(n));
    ws.lane1.resize(size_t(n));
    if (banded) ws.fb.resize(size_t(n));
    double* y = ws.ypad.data() + zeta;

    double prev_out = 0.0;
    for (size_t t = 0; t < input.size(); ++t) {
        const double* gm = nullptr;
        const double* ga = nullptr;
        switch (mode) {
            case StepMode::Both:
                kt.gauss_block(seed, trial, t, n, sigma_m, sigma_a,
                               ws.lane0.data(), ws.lane1.data());
                gm = ws.lane0.data();
                ga = ws.lane1.data();
                break;
            case StepMode::AddOnly:
                // one draw per step: steps 2m and 2m+1 share Philox block m
                if ((t & 1) == 0)
                    kt.gauss_block(seed, trial, t >> 1, n, sigma_a, sigma_a,
                                   ws.lane0.data(), ws.lane1.data());
                ga = (t & 1) ? ws.lane1.data() : ws.lane0.data();
                break;
            case StepMode::MulOnly:
                if ((t & 1) == 0)
                    kt.gauss_block(seed, trial, t >> 1, n, sigma_m, sigma_m,
                                   ws.lane0.data(), ws.lane1.data());
                gm = (t & 1) ? ws.lane1.data() : ws.lane0.data();
                break;
            case StepMode::None:
                break;
        }

        const double* fb_ptr = nullptr;
        double fb_uniform = 0.0;
        if (gamma != 0.0) {
            if (!banded) {
                fb_uniform = prev_out;  // mean of y_prev, as emitted last step
            } else {
                kt.banded_matvec(ws.ypad.data(), n, topology.taps.data(), zeta,
                                 ws.fb.data());
                fb_ptr = ws.fb.data();
            }
        }

        kt.step_combine(n, alpha, params.beta * input[t], gamma, fb_ptr,
                        fb_uniform, mode, gm, ga, y);
        if (banded && wrap && zeta > 0 && gamma != 0.0) {
            std::memcpy(ws.ypad.data(), y + (n - zeta), sizeof(double) * zeta);
            std::memcpy(y + n, y, sizeof(double) * zeta);
        }
        prev_out = kt.block_sum(y, n) / n;
        out[t] = prev_out;
    }
}

Trajectory run_trajectory(const SignalSpec& signal, const EsnParams& params,
                          const ReservoirTopology& topology,
                          const NoiseSpec& spec, uint64_t seed, uint32_t trial) {
    validate(params, spec);
    const std::vector<double> input = materialize(signal);
    Trajectory traj;
    traj.outputs.resize(input.size());
    traj.descriptor = Trajectory::Descriptor{
        params,          spec,          signal,
        topology.kind,   topology.zeta, topology.kernel,
        topology.boundary, seed,        trial};
    TrialWorkspace ws;
    run_trajectory_into(traj.outputs.data(), input, params, topology, spec,
                        seed, trial, ws);
    return traj;
}

}  // namespace esnoise
