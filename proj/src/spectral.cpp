#include "schrolab/spectral.hpp"

#include "schrolab/errors.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>

namespace schrolab {

namespace {

constexpr double kRegularization = 1e-12;
constexpr std::uint64_t kStartSeed = 0x5eedf00dULL;

// B = M^{-1/2} (K - shift M) M^{-1/2} = M^{-1/2} K M^{-1/2} - shift I.
ComplexSparse scaled_operator(const SchrodingerSystem& system, Complex shift) {
  const Eigen::VectorXd d = system.mass.diagonal.cwiseSqrt().cwiseInverse();
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(system.matrix.nonZeros() + system.size()));
  for (int k = 0; k < system.matrix.outerSize(); ++k)
    for (ComplexSparse::InnerIterator it(system.matrix, k); it; ++it)
      triplets.emplace_back(it.row(), it.col(), d[it.row()] * it.value() * d[it.col()]);
  if (shift != Complex(0.0))
    for (Eigen::Index i = 0; i < system.size(); ++i) triplets.emplace_back(i, i, -shift);
  ComplexSparse b(system.size(), system.size());
  b.setFromTriplets(triplets.begin(), triplets.end());
  b.makeCompressed();
  return b;
}

double norm_bound(const ComplexSparse& b) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(b.rows());
  Eigen::VectorXd cols = Eigen::VectorXd::Zero(b.cols());
  for (int k = 0; k < b.outerSize(); ++k) {
    for (ComplexSparse::InnerIterator it(b, k); it; ++it) {
      rows[it.row()] += std::abs(it.value());
      cols[it.col()] += std::abs(it.value());
    }
  }
  if (rows.size() == 0) return 0.0;
  return std::sqrt(rows.maxCoeff() * cols.maxCoeff());
}

Eigen::VectorXcd start_vector(const MassMatrix& mass) {
  // Ones perturbed by a fixed-seed sequence so that modes orthogonal to
  // constants are still reachable.
  std::mt19937_64 engine(kStartSeed);
  Eigen::VectorXcd x(mass.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    x[i] = std::sqrt(mass.diagonal[i]) * (1.0 + 0.1 * (2.0 * u - 1.0));
  }
  return x.normalized();
}

class ShiftInvertSolver {
 public:
  explicit ShiftInvertSolver(const ComplexSparse& b) : b_(b), norm_(norm_bound(b)) {
    if (!factor(b_)) regularize();
  }

  // Solves B x = rhs, falling back to the regularized factorization when
  // the exact one produced non-finite values.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) {
    Eigen::VectorXcd x = lu_.solve(rhs);
    if (!x.allFinite() && eps_ == 0.0) {
      regularize();
      x = lu_.solve(rhs);
    }
    if (!x.allFinite()) throw SolverError("shift-invert solve produced non-finite values" + diagnostics());
    return x;
  }

  // B^H x = rhs, using B^T = B.
  Eigen::VectorXcd solve_adjoint(const Eigen::VectorXcd& rhs) { return solve(rhs.conjugate()).conjugate(); }

  double norm() const { return norm_; }
  double regularization() const { return eps_; }

 private:
  bool factor(const ComplexSparse& m) {
    lu_.analyzePattern(m);
    lu_.factorize(m);
    return lu_.info() == Eigen::Success;
  }

  void regularize() {
    eps_ = kRegularization * (norm_ > 0.0 ? norm_ : 1.0);
    ComplexSparse shifted = b_;
    for (Eigen::Index i = 0; i < shifted.rows(); ++i) shifted.coeffRef(i, i) += eps_;
    if (!factor(shifted)) throw SolverError("factorization failed after regularization" + diagnostics());
  }

  std::string diagnostics() const {
    std::ostringstream ss;
    ss << " (n = " << b_.rows() << ", |B| <= " << norm_ << ", eps = " << eps_ << ", lu: " << lu_.lastErrorMessage() << ")";
    return ss.str();
  }

  const ComplexSparse& b_;
  double norm_;
  double eps_ = 0.0;
  Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>> lu_;
};

SpectralResult finish(const SchrodingerSystem& system, const ComplexSparse& b, const Eigen::VectorXcd& x) {
  SpectralResult r;
  r.sigma = (b * x).norm() / x.norm();
  r.operator_norm = norm_bound(b);
  const Eigen::VectorXd d = system.mass.diagonal.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXcd f = d.cast<Complex>().cwiseProduct(x);
  r.f = normalize_and_fix_phase(f, system.mass);
  const Eigen::VectorXcd v = system.mass.diagonal.cwiseSqrt().cast<Complex>().cwiseProduct(r.f);
  const Eigen::VectorXcd kv = system.matrix * d.cast<Complex>().cwiseProduct(v);
  r.eigenvalue = v.dot(d.cast<Complex>().cwiseProduct(kv)) / v.squaredNorm();
  return r;
}

SpectralResult singular_iteration(const SchrodingerSystem& system, Complex shift, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("spectral tolerance must be positive");
  if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (system.size() == 0) throw InvalidArgument("empty system");

  const ComplexSparse b = scaled_operator(system, shift);
  ShiftInvertSolver solver(b);
  Eigen::VectorXcd x = start_vector(system.mass);
  int it = 0;
  bool converged = false;
  while (it < max_iter && !converged) {
    ++it;
    Eigen::VectorXcd z = solver.solve(solver.solve_adjoint(x));
    const double nz = z.norm();
    if (!(nz > 0.0)) throw SolverError("inverse iteration collapsed to zero");
    z /= nz;
    const Complex overlap = x.dot(z);
    const Complex align = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : Complex(1.0);
    converged = (z * align - x).norm() <= tol;
    x = z * align;
  }
  SpectralResult r = finish(system, b, x);
  if (shift != Complex(0.0)) r.eigenvalue = finish(system, scaled_operator(system, 0.0), x).eigenvalue;
  r.iterations = it;
  r.converged = converged;
  r.regularization = solver.regularization();
  return r;
}

}  // namespace

ComplexField normalize_and_fix_phase(const ComplexField& f, const MassMatrix& mass) {
  const double norm = std::sqrt((mass.diagonal.array() * f.array().abs2()).sum());
  if (!(norm > 0.0)) throw InvalidArgument("cannot normalize a zero field");
  ComplexField g = f / norm;
  Eigen::Index k = 0;
  for (Eigen::Index i = 1; i < g.size(); ++i)
    if (std::abs(g[i]) > std::abs(g[k])) k = i;
  const double mod = std::abs(g[k]);
  g *= std::conj(g[k]) / mod;
  g[k] = mod;
  return g;
}

SpectralResult kernel_vector(const SchrodingerSystem& system, double tol, int max_iter) {
  return singular_iteration(system, 0.0, tol, max_iter);
}

SpectralResult eigenpair_nearest(const SchrodingerSystem& system, Complex shift, double tol, int max_iter) {
  return singular_iteration(system, shift, tol, max_iter);
}

SpectralResult evaluate_candidate(const SchrodingerSystem& system, const ComplexField& f) {
  if (f.size() != system.size()) throw InvalidArgument("candidate length does not match system");
  const Eigen::VectorXcd x = system.mass.diagonal.cwiseSqrt().cast<Complex>().cwiseProduct(f);
  SpectralResult r = finish(system, scaled_operator(system, 0.0), x);
  r.converged = true;
  return r;
}

DenseSpectrum dense_oracle(const SchrodingerSystem& system) {
  const Eigen::Index n = system.size();
  if (n > kDenseOracleLimit) throw InvalidArgument("dense_oracle: system larger than " + std::to_string(kDenseOracleLimit));
  if (n == 0) throw InvalidArgument("dense_oracle: empty system");
  const Eigen::MatrixXcd b = Eigen::MatrixXcd(scaled_operator(system, 0.0));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeFullV);
  DenseSpectrum out;
  out.singular_values = svd.singularValues();
  out.sigma_max = out.singular_values[0];
  out.sigma_min = out.singular_values[n - 1];
  const Eigen::VectorXcd v = svd.matrixV().col(n - 1);
  const Eigen::VectorXd d = system.mass.diagonal.cwiseSqrt().cwiseInverse();
  out.f = normalize_and_fix_phase(d.cast<Complex>().cwiseProduct(v), system.mass);
  return out;
}

}  // namespace schrolab
