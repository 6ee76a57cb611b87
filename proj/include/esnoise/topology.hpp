#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace esnoise {

enum class BlurKernel {
    SymmetricGaussian,  // w(d) = exp(-(d/zeta)^2)
    LiteralEq7,         // w(d) = exp(-(d/zeta^2)), asymmetric in d
};

// Band placement at the matrix borders. Wrap keeps every row and column
// sum at exactly 1 (circulant); Truncate drops the band entries that fall
// outside the matrix, so border rows sum to less than 1. Truncate exists
// for comparison runs only and intentionally breaks the stochasticity
// invariants.
enum class Boundary { Wrap, Truncate };

class BandTooWide : public std::invalid_argument {
public:
    BandTooWide(int zeta, int n)
        : std::invalid_argument("band 2*" + std::to_string(zeta) +
                                "+1 exceeds matrix size " + std::to_string(n)) {}
};

// Reservoir connection matrix. Entry (i, k) couples source neuron i to
// target neuron k; the state update contracts over the source index.
struct ReservoirTopology {
    enum class Kind { Uniform, DiagonalBlurred };

    Kind kind = Kind::Uniform;
    int n = 0;
    int zeta = 0;
    BlurKernel kernel = BlurKernel::SymmetricGaussian;
    Boundary boundary = Boundary::Wrap;

    // Normalized band weights at offsets -zeta..zeta (DiagonalBlurred only).
    std::vector<double> taps;
    // Dense n*n row-major realization, for export and cross-checks.
    std::vector<double> matrix;
};

const char* to_string(ReservoirTopology::Kind kind) noexcept;
const char* to_string(BlurKernel kernel) noexcept;
const char* to_string(Boundary boundary) noexcept;

// All entries 1/n.
ReservoirTopology uniform_matrix(int n);

// Band of width 2*zeta+1 around the diagonal, weights from the chosen
// kernel normalized so each (full) row sums to 1. zeta = 0 is the identity
// under either kernel. Throws BandTooWide when 2*zeta+1 > n.
ReservoirTopology diagonal_blurred_matrix(int n, int zeta,
                                          BlurKernel kernel = BlurKernel::SymmetricGaussian,
                                          Boundary boundary = Boundary::Wrap);

// Full dense matrix, row-major, one CSV line per row, 17 significant digits.
void write_matrix_csv(const ReservoirTopology& topology, std::ostream& os);

}  // namespace esnoise
