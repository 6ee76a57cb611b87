#include "esnoise/stats.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace esnoise {

namespace {

int resolve_workers(int workers, int trials) {
    if (workers <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw == 0 ? 1 : int(std::min(hw, 8u));
    }
    return std::max(1, std::min(workers, trials));
}

// Run fn(trial, workspace) for trial = 0..trials-1 across workers. Trial
// outputs land in disjoint buffers, so scheduling order cannot matter.
template <typename Fn>
void parallel_trials(int trials, int workers, Fn&& fn) {
    workers = resolve_workers(workers, trials);
    if (workers == 1) {
        TrialWorkspace ws;
        for (int k = 0; k < trials; ++k) fn(k, ws);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            TrialWorkspace ws;
            try {
                for (int k = next.fetch_add(1); k < trials;
                     k = next.fetch_add(1)) {
                    if (failed.load(std::memory_order_relaxed)) return;
                    fn(k, ws);
                }
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Deterministic column-wise reduction: four stripe accumulators over the
// trial index, combined as (s0+s1)+(s2+s3) regardless of worker count.
struct ColumnMoments {
    std::vector<double> mean;
    std::vector<double> variance;  // unbiased, divisor K-1
};

ColumnMoments column_moments(const std::vector<double>& rows, int trials,
                             int width) {
    const auto& kt = kernels::active_table();
    std::array<std::vector<double>, 4> acc;
    for (auto& a : acc) a.assign(size_t(width), 0.0);
    for (int k = 0; k < trials; ++k)
        kt.acc_add(acc[size_t(k & 3)].data(), &rows[size_t(k) * width], width);

    ColumnMoments m;
    m.mean.resize(size_t(width));
    for (int t = 0; t < width; ++t)
        m.mean[size_t(t)] = ((acc[0][size_t(t)] + acc[1][size_t(t)]) +
                             (acc[2][size_t(t)] + acc[3][size_t(t)])) /
                            trials;

    for (auto& a : acc) a.assign(size_t(width), 0.0);
    for (int k = 0; k < trials; ++k)
        kt.acc_sq_diff(acc[size_t(k & 3)].data(), &rows[size_t(k) * width],
                       m.mean.data(), width);
    m.variance.resize(size_t(width));
    for (int t = 0; t < width; ++t)
        m.variance[size_t(t)] = ((acc[0][size_t(t)] + acc[1][size_t(t)]) +
                                 (acc[2][size_t(t)] + acc[3][size_t(t)])) /
                                (trials - 1);
    return m;
}

}  // namespace

EnsembleStats ensemble(const SimConfig& config, int trials, int workers) {
    validate(config);
    if (trials < 2)
        throw ConstraintViolation("trials_min", "ensemble needs at least 2 trials");
    if (uint64_t(trials) >= kernels::kSignalTrialId)
        throw ConstraintViolation("trials_max", "trial id space exceeded");

    const std::vector<double> input = materialize(config.signal);
    const int width = int(input.size());
    std::vector<double> rows(size_t(trials) * width);
    parallel_trials(trials, workers, [&](int k, TrialWorkspace& ws) {
        run_trajectory_into(&rows[size_t(k) * width], input, config.params,
                            config.topology, config.noise, config.seed,
                            uint32_t(k), ws);
    });

    ColumnMoments m = column_moments(rows, trials, width);
    EnsembleStats stats;
    stats.trials = trials;
    stats.mean = std::move(m.mean);
    stats.dispersion = std::move(m.variance);
    stats.snr.resize(size_t(width));
    stats.snr_defined.resize(size_t(width));
    for (int t = 0; t < width; ++t) {
        const double d = stats.dispersion[size_t(t)];
        if (d > 0.0) {
            stats.snr[size_t(t)] = stats.mean[size_t(t)] / d;
            stats.snr_defined[size_t(t)] = 1;
        } else {
            stats.snr[size_t(t)] = std::numeric_limits<double>::quiet_NaN();
            stats.snr_defined[size_t(t)] = 0;
        }
    }
    return stats;
}

double predict_variance_single(const NoiseSpec& spec, Activation activation,
                               double x_in) {
    validate(spec);
    double v = 0.0;
    if (spec.additive_enabled) v += spec.d_add;
    if (spec.multiplicative_enabled) {
        const double fx = activation(x_in);
        v += spec.d_mul * fx * fx;
    }
    return v;
}

double predict_variance_esn_no_memory(const NoiseSpec& spec,
                                      const EsnParams& params, double x_in) {
    if (params.gamma != 0.0) throw GammaNotZero(params.gamma);
    validate(params);
    return predict_variance_single(spec, params.activation, x_in) /
           params.n_reservoir;
}

std::vector<GammaSweepPoint> sweep_gamma(const SimConfig& base,
                                         std::span<const double> gammas,
                                         int trials, int discard, int workers) {
    const int width = base.signal.kind == SignalSpec::Kind::Explicit
                          ? int(base.signal.samples.size())
                          : base.signal.length;
    int skip = discard >= 0 ? discard : default_transient_discard(base.signal);
    skip = std::min(skip, width - 1);

    std::vector<GammaSweepPoint> points;
    points.reserve(gammas.size());
    for (double g : gammas) {
        if (!(g >= 0.0 && g < 1.0))
            throw ConstraintViolation("gamma_range",
                                      "sweep gamma must lie in [0,1), got " +
                                          std::to_string(g));
        SimConfig cfg = base;
        cfg.params.gamma = g;
        cfg.params.beta = 1.0 - g;

        cfg.noise = with_mode(base.noise, NoiseMode::Additive);
        const EnsembleStats add = ensemble(cfg, trials, workers);
        cfg.noise = with_mode(base.noise, NoiseMode::Multiplicative);
        const EnsembleStats mul = ensemble(cfg, trials, workers);

        GammaSweepPoint p;
        p.gamma = g;
        double level = 0.0;
        for (int t = skip; t < width; ++t) level += add.dispersion[size_t(t)];
        p.additive_level = level / (width - skip);
        p.mul_min = std::numeric_limits<double>::infinity();
        p.mul_max = -std::numeric_limits<double>::infinity();
        for (int t = skip; t < width; ++t) {
            p.mul_min = std::min(p.mul_min, mul.dispersion[size_t(t)]);
            p.mul_max = std::max(p.mul_max, mul.dispersion[size_t(t)]);
        }
        points.push_back(p);
    }
    return points;
}

std::vector<AlphaInputCell> sweep_alpha_input(std::span<const double> alphas,
                                              std::span<const double> xs,
                                              const NoiseSpec& spec, int trials,
                                              uint64_t seed, int workers) {
    if (alphas.empty() || xs.empty())
        throw ConstraintViolation("grid_empty", "alpha and x grids must be non-empty");

    SignalSpec grid_signal;
    grid_signal.kind = SignalSpec::Kind::Explicit;
    grid_signal.samples.assign(xs.begin(), xs.end());
    grid_signal.length = int(xs.size());

    std::vector<AlphaInputCell> cells;
    cells.reserve(3 * alphas.size() * xs.size());
    for (NoiseMode mode :
         {NoiseMode::Additive, NoiseMode::Multiplicative, NoiseMode::Mixed}) {
        const NoiseSpec mode_spec = with_mode(spec, mode);
        for (double a : alphas) {
            const SimConfig cfg =
                single_neuron_config(a, mode_spec, grid_signal, seed);
            const EnsembleStats st = ensemble(cfg, trials, workers);
            for (size_t i = 0; i < xs.size(); ++i) {
                cells.push_back(AlphaInputCell{
                    a, xs[i], mode, st.mean[i], st.dispersion[i], st.snr[i],
                    st.snr_defined[i] != 0});
            }
        }
    }
    return cells;
}

}  // namespace esnoise
