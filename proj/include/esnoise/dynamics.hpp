#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "esnoise/core.hpp"
#include "esnoise/kernels.hpp"
#include "esnoise/noise.hpp"
#include "esnoise/topology.hpp"

namespace esnoise {

class DimensionMismatch : public std::invalid_argument {
public:
    explicit DimensionMismatch(const std::string& what)
        : std::invalid_argument("dimension mismatch: " + what) {}
};

// Everything one simulation run depends on. Immutable once validated;
// shared read-only across workers.
struct SimConfig {
    EsnParams params;
    NoiseSpec noise;
    SignalSpec signal;
    ReservoirTopology topology;
    uint64_t seed = 1;
};

void validate(const SimConfig& config);

// Single neuron with its own NoiseSpec and alpha, no memory: N = 1,
// beta = 1, gamma = 0.
SimConfig single_neuron_config(double alpha, const NoiseSpec& noise,
                               SignalSpec signal, uint64_t seed);

// Noisy reservoir outputs at the previous step.
struct ReservoirState {
    std::vector<double> y_prev;
    int64_t t = 0;
};

ReservoirState initial_state(int n_reservoir);

struct Trajectory {
    std::vector<double> outputs;

    // Snapshot of the scalar configuration that produced the run (the
    // topology is recorded by its construction recipe, not the dense
    // matrix).
    struct Descriptor {
        EsnParams params;
        NoiseSpec noise;
        SignalSpec signal;
        ReservoirTopology::Kind topology_kind;
        int zeta;
        BlurKernel kernel;
        Boundary boundary;
        uint64_t seed;
        uint32_t trial;
    } descriptor;
};

// y_out for one isolated neuron: apply_noise(alpha * x_in).
double single_neuron_response(double x_in, Activation activation,
                              const NoiseSpec& spec, NoiseStream& stream);

// One reservoir update (Eq. of motion for the network):
//   per neuron k: x_k = alpha * (beta * x_in + gamma * sum_j W[j,k] y_prev[j])
//                 y_k = apply_noise(x_k) on that neuron's stream
//   output       x_out = mean_k y_k
// Streams must hold one entry per neuron. Returns the advanced state and
// the output sample.
std::pair<ReservoirState, double> esn_step(const ReservoirState& state,
                                           double x_in_t,
                                           const EsnParams& params,
                                           const ReservoirTopology& topology,
                                           const NoiseSpec& spec,
                                           std::span<NoiseStream> streams);

// Scratch buffers reused across trajectories by one worker.
struct TrialWorkspace {
    std::vector<double> ypad;
    std::vector<double> fb;
    std::vector<double> lane0, lane1;
};

// Full run from the zero state over a materialized input signal, outputs
// written to out[0..len). Deterministic given (seed, trial): same bits on
// every replay, whichever kernel variant executes.
void run_trajectory_into(double* out, std::span<const double> input,
                         const EsnParams& params,
                         const ReservoirTopology& topology,
                         const NoiseSpec& spec, uint64_t seed, uint32_t trial,
                         TrialWorkspace& ws,
                         const kernels::KernelTable& kt = kernels::active_table());

Trajectory run_trajectory(const SignalSpec& signal, const EsnParams& params,
                          const ReservoirTopology& topology,
                          const NoiseSpec& spec, uint64_t seed, uint32_t trial);

}  // namespace esnoise
