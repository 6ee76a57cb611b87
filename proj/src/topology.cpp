#include "esnoise/topology.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace esnoise {

const char* to_string(ReservoirTopology::Kind kind) noexcept {
    return kind == ReservoirTopology::Kind::Uniform ? "uniform" : "diagonal";
}

const char* to_string(BlurKernel kernel) noexcept {
    return kernel == BlurKernel::SymmetricGaussian ? "symmetric" : "literal";
}

const char* to_string(Boundary boundary) noexcept {
    return boundary == Boundary::Wrap ? "wrap" : "truncate";
}

ReservoirTopology uniform_matrix(int n) {
    if (n < 1) throw std::invalid_argument("matrix size must be >= 1");
    ReservoirTopology topo;
    topo.kind = ReservoirTopology::Kind::Uniform;
    topo.n = n;
    topo.matrix.assign(size_t(n) * n, 1.0 / n);
    return topo;
}

namespace {

std::vector<double> band_taps(int zeta, BlurKernel kernel) {
    if (zeta == 0) return {1.0};  // identity under either kernel
    std::vector<double> w(size_t(2 * zeta + 1));
    for (int d = -zeta; d <= zeta; ++d) {
        const double e = kernel == BlurKernel::SymmetricGaussian
                             ? -(double(d) / zeta) * (double(d) / zeta)
                             : -double(d) / (double(zeta) * zeta);
        w[size_t(d + zeta)] = std::exp(e);
    }
    double sum = 0.0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

ReservoirTopology diagonal_blurred_matrix(int n, int zeta, BlurKernel kernel,
                                          Boundary boundary) {
    if (n < 1) throw std::invalid_argument("matrix size must be >= 1");
    if (zeta < 0) throw std::invalid_argument("zeta must be >= 0");
    if (2 * zeta + 1 > n) throw BandTooWide(zeta, n);

    ReservoirTopology topo;
    topo.kind = ReservoirTopology::Kind::DiagonalBlurred;
    topo.n = n;
    topo.zeta = zeta;
    topo.kernel = kernel;
    topo.boundary = boundary;
    topo.taps = band_taps(zeta, kernel);
    topo.matrix.assign(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int d = -zeta; d <= zeta; ++d) {
            const double w = topo.taps[size_t(d + zeta)];
            if (boundary == Boundary::Wrap) {
                const int k = ((i + d) % n + n) % n;
                topo.matrix[size_t(i) * n + k] = w;
            } else {
                const int k = i + d;
                if (k >= 0 && k < n) topo.matrix[size_t(i) * n + k] = w;
            }
        }
    }
    return topo;
}

void write_matrix_csv(const ReservoirTopology& topology, std::ostream& os) {
    char buf[32];
    const int n = topology.n;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g",
                          topology.matrix[size_t(i) * n + k]);
            if (k) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace esnoise
