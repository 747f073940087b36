#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cirfuse/spectral.hpp"

namespace cirfuse {

/// Minimal dense complex matrix, row major.
struct CMat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> a;

    CMat() = default;
    CMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, cplx{0.0, 0.0}) {}

    cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static CMat identity(std::size_t n);
    double frobenius() const;
};

/// Windowed snapshot matrix H: rows = time instants, cols = delay bins.
struct SnapshotMatrix {
    CMat data;
    double sample_rate_hz = 0.0;
};

/// A = H^H F_I^H F_I H (band energy) and B = H^H F^H F H (total energy).
struct GeneralizedPair {
    CMat a;
    CMat b;
};

struct FusionWeights {
    std::vector<cplx> w;
    double lambda = 0.0;  ///< achieved generalized Rayleigh quotient
};

struct EigResult {
    std::vector<double> values;  ///< descending
    CMat vectors;                ///< columns, unitary
};

/// Thrown when a window carries no usable signal energy.
struct DegenerateWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Baseline: the column with maximal band-of-interest energy (ties to the
/// lowest index) and that column as the estimation sequence.
std::pair<std::size_t, std::vector<cplx>> select_bin(const SnapshotMatrix& h_matrix,
                                                     const DftPlan& plan);

/// Builds the (A, B) pair without materializing the DFT matrix: A from the
/// band-row DFT of each column, B as N * H^H H via Parseval. Both results
/// are Hermitized by averaging with their conjugate transpose.
GeneralizedPair build_pair(const SnapshotMatrix& h_matrix, const DftPlan& plan);

/// Cyclic Jacobi for Hermitian matrices: iterates complex plane rotations
/// until the off-diagonal Frobenius norm is below 1e-12 * ||m||. Throws on
/// inputs that are not Hermitian within tolerance.
EigResult hermitian_eig(const CMat& m);

/// Maximizes w^H A w subject to w^H B w = 1 by whitening with B's
/// eigendecomposition (components below rank_tol * lambda_max dropped) and
/// taking the top eigenvector of the whitened A. The global phase makes the
/// largest-magnitude entry real positive.
FusionWeights solve_fusion(const GeneralizedPair& pair, double rank_tol = 1e-10);

/// Full fusion step: drops near-zero-energy columns, solves the pair, and
/// returns the weights (zero on dropped columns) with x* = H w*.
std::pair<FusionWeights, std::vector<cplx>> fuse(const SnapshotMatrix& h_matrix,
                                                 const DftPlan& plan, double rank_tol = 1e-10);

}  // namespace cirfuse
