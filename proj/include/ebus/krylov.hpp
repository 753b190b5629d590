#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ebus/sparse.hpp"
#include "ebus/types.hpp"

namespace ebus {

/// y = H x for a real-symmetric (Hermitian) operator of dimension `dim`.
struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(std::span<const cplx>, std::span<cplx>)> apply;
};

LinearOperator as_operator(const CsrMatrix& h);

struct KrylovOptions {
  int subspace_dim = 30;
  /// Bound on the a-posteriori error estimate per accepted step.
  double step_tolerance = 1e-10;
  /// Step halvings allowed before giving up on a single step.
  int max_halvings = 40;
  /// First trial step; 0 means "whole remaining interval".
  double initial_step = 0.0;
};

struct KrylovStats {
  int steps = 0;
  int matvecs = 0;
  double max_error_estimate = 0.0;
};

/// psi <- exp(-i H t) psi by Lanczos stepping with adaptive step halving.
/// Throws NumericalFailure (with step count and residual) if a step cannot
/// meet the tolerance.
KrylovStats krylov_evolve(const LinearOperator& h, CVector& psi, double t,
                          const KrylovOptions& options = {});

/// Exact propagator for a small real-symmetric matrix via full
/// eigendecomposition: exp(-i H t) = V exp(-i Lambda t) V^T.
class EigenPropagator {
 public:
  /// `dense` is column-major n x n.
  EigenPropagator(std::vector<double> dense, std::size_t n);
  explicit EigenPropagator(const CsrMatrix& h);

  std::size_t dim() const { return n_; }
  std::span<const double> eigenvalues() const { return evals_; }

  /// psi <- exp(-i H t) psi
  void apply(CVector& psi, double t) const;
  /// Column-major exp(-i H t).
  CVector unitary(double t) const;
  /// Column `k` of exp(-i H t) without forming the full matrix.
  CVector column(std::size_t k, double t) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> evals_;
  std::vector<double> evecs_;  // column-major
};

}  // namespace ebus
