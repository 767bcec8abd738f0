#pragma once

#include "schrolab/operators.hpp"

#include <Eigen/Core>

namespace schrolab {

/// Minimal singular pair of the mass-scaled operator M^{-1/2} K M^{-1/2}.
/// Complex symmetric K is non-normal when Im V is non-zero, so "near the
/// kernel" is measured by singular values rather than eigenvalues.
struct SpectralResult {
  /// Smallest singular value of the scaled (and shifted) operator.
  double sigma = 0.0;
  /// Upper bound on the scaled operator's 2-norm, sqrt(|B|_1 |B|_inf).
  double operator_norm = 0.0;
  /// f^H M f = 1; the entry of maximum modulus (lowest index on ties) is
  /// real and positive.
  ComplexField f;
  /// Hermitian Rayleigh quotient of the unshifted scaled operator at f;
  /// the eigenvalue when the operator is normal.
  Complex eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Diagonal shift added because the factorization was singular (0 if none).
  double regularization = 0.0;

  double relative_sigma() const { return operator_norm > 0.0 ? sigma / operator_norm : sigma; }
};

/// Inverse iteration on B^H B with B = M^{-1/2} K M^{-1/2}, via one sparse
/// LU of B. If B is exactly singular the factorization of B + eps I,
/// eps = 1e-12 |B|, is used instead. Stops when successive normalized
/// iterates differ by at most `tol` (after phase alignment).
SpectralResult kernel_vector(const SchrodingerSystem& system, double tol = 1e-12, int max_iter = 500);

/// As `kernel_vector` with K - shift M in place of K. `eigenvalue` is
/// reported for the unshifted operator.
SpectralResult eigenpair_nearest(const SchrodingerSystem& system, Complex shift, double tol = 1e-12,
                                 int max_iter = 500);

/// Evaluates an arbitrary candidate field as if it were a solver result:
/// normalizes and phase-fixes f and reports sigma = |B v| / |v|.
SpectralResult evaluate_candidate(const SchrodingerSystem& system, const ComplexField& f);

struct DenseSpectrum {
  /// Descending singular values of the scaled operator.
  Eigen::VectorXd singular_values;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  /// Right singular vector of sigma_min mapped back to vertex values,
  /// normalized and phase-fixed like SpectralResult::f.
  ComplexField f;
};

constexpr Eigen::Index kDenseOracleLimit = 2000;

/// Full dense SVD; independent of the sparse iteration. Throws
/// InvalidArgument above kDenseOracleLimit vertices.
DenseSpectrum dense_oracle(const SchrodingerSystem& system);

/// Normalizes to f^H M f = 1 and rotates the max-modulus entry onto the
/// positive real axis.
ComplexField normalize_and_fix_phase(const ComplexField& f, const MassMatrix& mass);

}  // namespace schrolab
