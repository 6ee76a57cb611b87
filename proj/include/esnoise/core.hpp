#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace esnoise {

// Thrown by validate() and config loading; `field` names the violated
// invariant (e.g. "beta_gamma_sum", "negative_variance").
class ConstraintViolation : public std::runtime_error {
public:
    ConstraintViolation(std::string field, const std::string& detail)
        : std::runtime_error("constraint violation [" + field + "]: " + detail),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Variances of the two per-neuron white Gaussian noise sources.
// A disabled source contributes nothing, same as variance 0.
struct NoiseSpec {
    double d_add = 0.0;
    double d_mul = 0.0;
    bool additive_enabled = true;
    bool multiplicative_enabled = true;
};

// Linear activation f(x) = slope * x.
struct Activation {
    double slope = 1.0;

    double operator()(double x) const noexcept { return slope * x; }
};

// Reservoir size and the input/memory mixing weights. The input weights
// are the all-ones row and the readout is the uniform 1/N column; both are
// realized inside the dynamics rather than stored.
struct EsnParams {
    int n_reservoir = 100;
    double beta = 1.0;   // input weight
    double gamma = 0.0;  // memory weight, beta + gamma = 1
    Activation activation{};
};

// Description of the input sequence x_in(t), t = 0..length-1.
struct SignalSpec {
    enum class Kind { UniformRandom, Sine, Explicit };

    Kind kind = Kind::UniformRandom;
    int length = 200;

    // UniformRandom
    double lo = -1.0;
    double hi = 1.0;
    uint64_t seed = 1;  // independent of the noise seed

    // Sine: amplitude * sin(2*pi*t/period + phase)
    double amplitude = 1.0;
    double period = 50.0;
    double phase = 0.0;

    // Explicit
    std::vector<double> samples;
};

// The three measurement modes used throughout the experiments.
enum class NoiseMode { Additive, Multiplicative, Mixed };

const char* to_string(NoiseMode mode) noexcept;

// Restrict a NoiseSpec to one measurement mode (keeps the variances,
// toggles the enable flags).
NoiseSpec with_mode(const NoiseSpec& spec, NoiseMode mode) noexcept;

struct Defaults {
    NoiseSpec noise;
    EsnParams params;
    SignalSpec signal;
};

// Canonical configuration: D_A = D_M = 1e-2, N = 100, alpha = 1,
// beta = 1, gamma = 0, uniform random input of length 200 on [-1, 1].
Defaults paper_defaults();

// Throw ConstraintViolation naming the first violated invariant; otherwise
// return normally. Validated values are immutable by convention and safe to
// share across threads.
void validate(const EsnParams& params);
void validate(const NoiseSpec& noise);
void validate(const SignalSpec& signal);
void validate(const EsnParams& params, const NoiseSpec& noise);

// Realize the input sequence as concrete samples.
std::vector<double> materialize(const SignalSpec& signal);

// Sine sweeps discard one full period of transient by default; other
// signals discard nothing.
int default_transient_discard(const SignalSpec& signal) noexcept;

}  // namespace esnoise
