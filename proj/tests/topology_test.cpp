#include <cmath>
#include <sstream>

#include "doctest.h"
#include "esnoise/topology.hpp"

using namespace esnoise;

namespace {

double row_sum(const ReservoirTopology& t, int i) {
    double s = 0.0;
    for (int k = 0; k < t.n; ++k) s += t.matrix[size_t(i) * t.n + k];
    return s;
}

double col_sum(const ReservoirTopology& t, int k) {
    double s = 0.0;
    for (int i = 0; i < t.n; ++i) s += t.matrix[size_t(i) * t.n + k];
    return s;
}

int row_nonzeros(const ReservoirTopology& t, int i) {
    int c = 0;
    for (int k = 0; k < t.n; ++k)
        if (t.matrix[size_t(i) * t.n + k] != 0.0) ++c;
    return c;
}

}  // namespace

TEST_SUITE_BEGIN("topology");

TEST_CASE("uniform matrix entries") {
    const auto t2 = uniform_matrix(2);
    CHECK(t2.matrix == std::vector<double>{0.5, 0.5, 0.5, 0.5});

    const auto t1 = uniform_matrix(1);
    CHECK(t1.matrix == std::vector<double>{1.0});

    const auto t100 = uniform_matrix(100);
    for (double v : t100.matrix) CHECK(v == 0.01);
    for (int i = 0; i < 100; ++i) {
        CHECK(row_sum(t100, i) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(col_sum(t100, i) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("zeta = 0 is the identity under either kernel") {
    for (BlurKernel k : {BlurKernel::SymmetricGaussian, BlurKernel::LiteralEq7}) {
        const auto t = diagonal_blurred_matrix(5, 0, k);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                CHECK(t.matrix[size_t(i) * 5 + j] == (i == j ? 1.0 : 0.0));
    }
    const auto d1 = diagonal_blurred_matrix(1, 0, BlurKernel::SymmetricGaussian);
    CHECK(d1.matrix == uniform_matrix(1).matrix);
}

TEST_CASE("symmetric kernel weights at zeta = 2") {
    // oracle: w(d) = exp(-(d/2)^2) at offsets -2..2, normalized
    const auto t = diagonal_blurred_matrix(100, 2, BlurKernel::SymmetricGaussian);
    double w[5], sum = 0.0;
    for (int d = -2; d <= 2; ++d) {
        w[d + 2] = std::exp(-(d / 2.0) * (d / 2.0));
        sum += w[d + 2];
    }
    REQUIRE(t.taps.size() == 5);
    for (int m = 0; m < 5; ++m) CHECK(t.taps[size_t(m)] == w[m] / sum);

    CHECK(t.taps[2] == doctest::Approx(0.30364122471313626).epsilon(1e-14));
    CHECK(t.taps[1] == doctest::Approx(0.23647602357935094).epsilon(1e-14));
    CHECK(t.taps[0] == doctest::Approx(0.1117033640640809).epsilon(1e-14));

    // placement: row 10 holds taps at columns 8..12
    for (int d = -2; d <= 2; ++d)
        CHECK(t.matrix[10 * 100 + (10 + d)] == t.taps[size_t(d + 2)]);
    CHECK(t.matrix[10 * 100 + 13] == 0.0);
}

TEST_CASE("literal kernel weights at zeta = 2 are asymmetric") {
    // oracle: w(d) = exp(-d/4); negative offsets get the larger weights
    const auto t = diagonal_blurred_matrix(100, 2, BlurKernel::LiteralEq7);
    double w[5], sum = 0.0;
    for (int d = -2; d <= 2; ++d) {
        w[d + 2] = std::exp(-d / 4.0);
        sum += w[d + 2];
    }
    for (int m = 0; m < 5; ++m) CHECK(t.taps[size_t(m)] == w[m] / sum);

    CHECK(t.taps[0] == doctest::Approx(0.3100220098960511).epsilon(1e-14));
    CHECK(t.taps[4] == doctest::Approx(0.11405072375140664).epsilon(1e-14));
    CHECK(t.taps[0] > t.taps[4]);
    // still row and column stochastic thanks to the circulant layout
    for (int i : {0, 1, 50, 99}) {
        CHECK(row_sum(t, i) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(col_sum(t, i) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("symmetric kernel is even in the offset, exactly") {
    for (int zeta : {1, 2, 5, 20}) {
        const auto t =
            diagonal_blurred_matrix(64, zeta, BlurKernel::SymmetricGaussian);
        for (int d = 1; d <= zeta; ++d)
            CHECK(t.taps[size_t(zeta + d)] == t.taps[size_t(zeta - d)]);
    }
}

TEST_CASE("stochasticity and band sparsity across sizes") {
    for (int n : {3, 7, 41, 100}) {
        for (int zeta : {0, 1, 2, (n - 1) / 2}) {
            if (2 * zeta + 1 > n) continue;
            for (BlurKernel k :
                 {BlurKernel::SymmetricGaussian, BlurKernel::LiteralEq7}) {
                const auto t = diagonal_blurred_matrix(n, zeta, k);
                for (int i = 0; i < n; ++i) {
                    CHECK(std::fabs(row_sum(t, i) - 1.0) <= 1e-12);
                    CHECK(std::fabs(col_sum(t, i) - 1.0) <= 1e-12);
                    CHECK(row_nonzeros(t, i) == std::min(2 * zeta + 1, n));
                }
                for (double v : t.matrix) CHECK(v >= 0.0);
            }
        }
    }
}

TEST_CASE("ones vector is a fixed point of the transpose") {
    const auto t = diagonal_blurred_matrix(30, 4, BlurKernel::LiteralEq7);
    for (int k = 0; k < t.n; ++k) {
        double s = 0.0;
        for (int i = 0; i < t.n; ++i) s += t.matrix[size_t(i) * t.n + k] * 1.0;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("band wider than the matrix is rejected") {
    CHECK_THROWS_AS(diagonal_blurred_matrix(5, 3, BlurKernel::SymmetricGaussian),
                    BandTooWide);
    CHECK_NOTHROW(diagonal_blurred_matrix(5, 2, BlurKernel::SymmetricGaussian));
    CHECK_THROWS_AS(diagonal_blurred_matrix(100, 50, BlurKernel::SymmetricGaussian),
                    BandTooWide);
    CHECK_NOTHROW(diagonal_blurred_matrix(101, 50, BlurKernel::SymmetricGaussian));
}

TEST_CASE("truncated boundary drops border mass by design") {
    const auto t = diagonal_blurred_matrix(20, 3, BlurKernel::SymmetricGaussian,
                                           Boundary::Truncate);
    CHECK(row_sum(t, 0) < 1.0 - 1e-3);   // lost the left band
    CHECK(row_sum(t, 10) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(row_sum(t, 19) < 1.0 - 1e-3);
    // no wrap-around entries
    CHECK(t.matrix[0 * 20 + 19] == 0.0);
    CHECK(t.matrix[19 * 20 + 0] == 0.0);
}

TEST_CASE("matrix csv export is dense row-major") {
    const auto t = uniform_matrix(2);
    std::ostringstream os;
    write_matrix_csv(t, os);
    CHECK(os.str() == "0.5,0.5\n0.5,0.5\n");
}

TEST_SUITE_END();
