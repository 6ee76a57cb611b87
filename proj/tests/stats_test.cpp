#include <cmath>
#include <vector>

#include "doctest.h"
#include "esnoise/stats.hpp"

using namespace esnoise;

namespace {

SignalSpec sine_signal(int length = 200) {
    SignalSpec s;
    s.kind = SignalSpec::Kind::Sine;
    s.length = length;
    return s;
}

SignalSpec grid_signal(std::vector<double> xs) {
    SignalSpec s;
    s.kind = SignalSpec::Kind::Explicit;
    s.length = int(xs.size());
    s.samples = std::move(xs);
    return s;
}

SimConfig uniform_esn(double gamma, const NoiseSpec& noise, SignalSpec sig,
                      uint64_t seed = 11, int n = 100) {
    SimConfig cfg;
    cfg.params = EsnParams{n, 1.0 - gamma, gamma, Activation{1.0}};
    cfg.noise = noise;
    cfg.signal = std::move(sig);
    cfg.topology = uniform_matrix(n);
    cfg.seed = seed;
    return cfg;
}

const NoiseSpec kBoth{1e-2, 1e-2, true, true};
const NoiseSpec kAdd{1e-2, 1e-2, true, false};
const NoiseSpec kMul{1e-2, 1e-2, false, true};
const NoiseSpec kOff{1e-2, 1e-2, false, false};

// 3-sigma band half-width for a K-sample variance estimate.
double var_band(double variance, int trials) {
    return 3.0 * variance * std::sqrt(2.0 / (trials - 1));
}

struct Fit {
    double slope;
    double intercept;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

}  // namespace

TEST_SUITE_BEGIN("stats");

TEST_CASE("deterministic system has zero dispersion and undefined snr") {
    const auto cfg = uniform_esn(0.5, kOff, sine_signal(60));
    const EnsembleStats st = ensemble(cfg, 16);
    for (size_t t = 0; t < st.dispersion.size(); ++t) {
        CHECK(st.dispersion[t] == 0.0);
        CHECK(st.snr_defined[t] == 0);
        CHECK(std::isnan(st.snr[t]));
    }
}

TEST_CASE("ensemble moments match a direct recomputation") {
    // independent route: rebuild mean and unbiased variance from the
    // individual trajectories
    const int K = 7;
    const auto cfg = uniform_esn(0.3, kBoth, sine_signal(20), 5, 10);
    const EnsembleStats st = ensemble(cfg, K);

    std::vector<std::vector<double>> rows;
    for (int k = 0; k < K; ++k)
        rows.push_back(run_trajectory(cfg.signal, cfg.params, cfg.topology,
                                      cfg.noise, cfg.seed, uint32_t(k))
                           .outputs);
    for (size_t t = 0; t < st.mean.size(); ++t) {
        double sum = 0.0;
        for (const auto& r : rows) sum += r[t];
        const double mean = sum / K;
        double ss = 0.0;
        for (const auto& r : rows) ss += (r[t] - mean) * (r[t] - mean);
        const double var = ss / (K - 1);
        CHECK(st.mean[t] == doctest::Approx(mean).epsilon(1e-13));
        CHECK(st.dispersion[t] == doctest::Approx(var).epsilon(1e-12));
        if (st.snr_defined[t]) {
            CHECK(st.snr[t] == st.mean[t] / st.dispersion[t]);
            CHECK((st.snr[t] < 0.0) == (st.mean[t] < 0.0));
        }
    }
}

TEST_CASE("ensemble results are identical for any worker count") {
    const auto cfg = uniform_esn(0.5, kBoth, sine_signal(50), 3, 20);
    const EnsembleStats a = ensemble(cfg, 40, 1);
    const EnsembleStats b = ensemble(cfg, 40, 4);
    const EnsembleStats c = ensemble(cfg, 40, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.dispersion == b.dispersion);
    CHECK(a.mean == c.mean);
    CHECK(a.dispersion == c.dispersion);
}

TEST_CASE("ensemble validates the trial count") {
    const auto cfg = uniform_esn(0.0, kBoth, sine_signal(10));
    CHECK_THROWS_AS(ensemble(cfg, 1), ConstraintViolation);
}

TEST_CASE("single neuron variance predictor") {
    CHECK(predict_variance_single(kAdd, Activation{1.0}, 0.77) == 1e-2);
    CHECK(predict_variance_single(kMul, Activation{1.0}, 0.0) == 0.0);
    CHECK(predict_variance_single(kBoth, Activation{1.0}, 1.0) == 2e-2);
    CHECK(predict_variance_single(kMul, Activation{2.0}, 0.5) ==
          doctest::Approx(1e-2).epsilon(1e-15));
    CHECK(predict_variance_single(kOff, Activation{1.0}, 1.0) == 0.0);
}

TEST_CASE("memoryless esn variance predictor") {
    const EsnParams p{100, 1.0, 0.0, Activation{1.0}};
    CHECK(predict_variance_esn_no_memory(kAdd, p, 0.3) ==
          doctest::Approx(1e-4).epsilon(1e-15));
    CHECK(predict_variance_esn_no_memory(kMul, p, 1.0) ==
          doctest::Approx(1e-4).epsilon(1e-15));
    const EsnParams one{1, 1.0, 0.0, Activation{1.0}};
    for (double x : {-1.0, 0.0, 0.4}) {
        CHECK(predict_variance_esn_no_memory(kBoth, one, x) ==
              predict_variance_single(kBoth, one.activation, x));
    }
    const EsnParams mem{100, 0.5, 0.5, Activation{1.0}};
    CHECK_THROWS_AS(predict_variance_esn_no_memory(kAdd, mem, 0.0),
                    GammaNotZero);
}

TEST_CASE("bare noise operator dispersion tracks the closed form") {
    // 5x5 (alpha, x) grid, mixed mode, three seeds; every cell must sit
    // inside the 3-sigma band of the predictor
    const std::vector<double> alphas{0.25, 0.5, 1.0, 1.5, 2.0};
    const std::vector<double> xs{-1.0, -0.3, 0.0, 0.5, 1.0};
    const int K = 1000;
    for (uint64_t seed : {101ull, 202ull, 303ull}) {
        const auto cells = sweep_alpha_input(alphas, xs, kBoth, K, seed);
        int inside = 0, mixed_cells = 0;
        for (const auto& c : cells) {
            if (c.mode != NoiseMode::Mixed) continue;
            ++mixed_cells;
            const double predicted =
                predict_variance_single(kBoth, Activation{c.alpha}, c.x_in);
            if (std::fabs(c.dispersion - predicted) <= var_band(predicted, K))
                ++inside;
        }
        CHECK(mixed_cells == 25);
        CHECK(inside >= mixed_cells);  // 99% rounded up at 25 cells
    }
}

TEST_CASE("alpha sweep reproduces the level, parabola and snr facts") {
    const std::vector<double> alphas{0.5, 1.0, 2.0};
    const std::vector<double> xs{-1.0, -0.5, 0.5, 1.0};
    const int K = 1000;
    const auto cells = sweep_alpha_input(alphas, xs, kBoth, K, 31);

    double snr_mul_min = 1e300, snr_mul_max = -1e300;
    for (const auto& c : cells) {
        if (c.mode == NoiseMode::Additive) {
            // dispersion is flat at d_add across the whole grid
            CHECK(std::fabs(c.dispersion - 1e-2) <= var_band(1e-2, K));
        } else if (c.mode == NoiseMode::Multiplicative) {
            const double predicted = 1e-2 * c.alpha * c.alpha * c.x_in * c.x_in;
            CHECK(std::fabs(c.dispersion - predicted) <=
                  var_band(predicted, K) + 1e-12);
            if (c.x_in == 0.5 && c.snr_defined) {
                snr_mul_min = std::min(snr_mul_min, c.snr);
                snr_mul_max = std::max(snr_mul_max, c.snr);
            }
        }
    }
    // multiplicative snr does not depend on alpha (15% across the grid)
    CHECK(snr_mul_max / snr_mul_min <= 1.15);

    // mixed dispersion is the sum of the pure dispersions, cell by cell
    for (size_t i = 0; i < alphas.size() * xs.size(); ++i) {
        const auto& add = cells[i];
        const auto& mul = cells[alphas.size() * xs.size() + i];
        const auto& mix = cells[2 * alphas.size() * xs.size() + i];
        const double expect = add.dispersion + mul.dispersion;
        CHECK(std::fabs(mix.dispersion - expect) <=
              var_band(expect, K) + var_band(add.dispersion, K) +
                  var_band(mul.dispersion, K));
    }
}

TEST_CASE("gamma sweep level grows and multiplicative range reaches low") {
    SimConfig base = uniform_esn(0.0, kBoth, sine_signal(200), 17);
    const std::vector<double> gammas{0.0, 0.2, 0.4, 0.6, 0.8, 0.9};
    const int K = 300;
    const auto points = sweep_gamma(base, gammas, K);
    REQUIRE(points.size() == gammas.size());

    // gamma = 0 sits at the memoryless closed form d_add / N
    CHECK(std::fabs(points[0].additive_level - 1e-4) <= var_band(1e-4, K));

    // additive level nondecreasing up to paired Monte Carlo tolerance
    for (size_t i = 1; i < points.size(); ++i)
        CHECK(points[i].additive_level >= points[i - 1].additive_level * 0.97);

    // the sine crosses zero: multiplicative dispersion range reaches low
    CHECK(points[0].mul_min <= 1e-12);
    for (const auto& p : points) {
        CHECK(p.mul_min <= 0.25 * p.mul_max);
        CHECK(p.mul_max > 0.5e-4);
    }

    CHECK_THROWS_AS(sweep_gamma(base, std::vector<double>{1.0}, K),
                    ConstraintViolation);
}

TEST_CASE("gamma 0.5 multiplicative minimum is near zero") {
    SimConfig base = uniform_esn(0.0, kMul, sine_signal(200), 23);
    const auto points = sweep_gamma(base, std::vector<double>{0.5}, 1000);
    CHECK(points[0].mul_min < 5e-6);
    CHECK(points[0].mul_min < 0.05 * points[0].mul_max);
}

TEST_CASE("dispersion against mean output keeps the single-neuron shapes") {
    // gamma = 0.5 sine run: additive dispersion flat in mu^2,
    // multiplicative dispersion a parabola through the origin
    const int K = 800;
    const auto add =
        ensemble(uniform_esn(0.5, kAdd, sine_signal(200), 29), K);
    const auto mul =
        ensemble(uniform_esn(0.5, kMul, sine_signal(200), 29), K);

    std::vector<double> mu2_add, mu2_mul;
    for (double m : add.mean) mu2_add.push_back(m * m);
    for (double m : mul.mean) mu2_mul.push_back(m * m);

    const Fit fa = least_squares(mu2_add, add.dispersion);
    double add_level = 0.0, mu2_max = 0.0;
    for (size_t t = 0; t < add.dispersion.size(); ++t) {
        add_level += add.dispersion[t];
        mu2_max = std::max(mu2_max, mu2_add[t]);
    }
    add_level /= double(add.dispersion.size());
    CHECK(std::fabs(fa.slope) * mu2_max <= 0.1 * add_level);

    const Fit fm = least_squares(mu2_mul, mul.dispersion);
    double mul_max = 0.0;
    for (double d : mul.dispersion) mul_max = std::max(mul_max, d);
    CHECK(fm.slope > 0.0);
    CHECK(std::fabs(fm.intercept) <= 0.1 * mul_max);
}

TEST_SUITE_END();
