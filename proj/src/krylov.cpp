#include "ebus/krylov.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "ebus/kernels.hpp"

namespace ebus {

LinearOperator as_operator(const CsrMatrix& h) {
  return {h.rows, [&h](std::span<const cplx> x, std::span<cplx> y) { kernels::csr_matvec(h, x, y); }};
}

namespace {

struct Tridiagonal {
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis vectors j and j+1
};

}  // namespace

KrylovStats krylov_evolve(const LinearOperator& h, CVector& psi, double t,
                          const KrylovOptions& options) {
  KrylovStats stats;
  if (psi.size() != h.dim) throw InvalidArgument("krylov_evolve: dimension mismatch");
  if (options.subspace_dim < 2) throw InvalidArgument("krylov_evolve: subspace dimension must be at least 2");
  if (!(options.step_tolerance > 0.0)) throw InvalidArgument("krylov_evolve: tolerance must be positive");
  if (!std::isfinite(t)) throw InvalidArgument("krylov_evolve: time must be finite");
  if (t == 0.0 || h.dim == 0) return stats;

  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(options.subspace_dim), h.dim);
  std::vector<CVector> basis(m + 1, CVector(h.dim));
  CVector w(h.dim);

  const double sign = t > 0 ? 1.0 : -1.0;
  double remaining = std::abs(t);
  double trial = options.initial_step > 0.0 ? options.initial_step : remaining;

  while (remaining > 1e-15 * std::abs(t)) {
    const double beta0 = kernels::norm(psi);
    if (beta0 == 0.0) return stats;
    std::copy(psi.begin(), psi.end(), basis[0].begin());
    kernels::scale(1.0 / beta0, basis[0]);

    Tridiagonal tri;
    std::size_t k = 0;
    bool invariant = false;
    double beta_last = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      h.apply(basis[j], w);
      ++stats.matvecs;
      const double a = kernels::dot(basis[j], w).real();
      tri.alpha.push_back(a);
      kernels::axpy(-a, basis[j], w);
      if (j > 0) kernels::axpy(-tri.beta[j - 1], basis[j - 1], w);
      // Full reorthogonalisation; m is small and the basis loses
      // orthogonality quickly once eigenvalues converge.
      for (std::size_t i = 0; i <= j; ++i) kernels::axpy(-kernels::dot(basis[i], w), basis[i], w);
      const double b = kernels::norm(w);
      k = j + 1;
      if (b < 1e-13 * (std::abs(a) + 1.0)) {
        invariant = true;
        break;
      }
      beta_last = b;
      if (j + 1 < m) tri.beta.push_back(b);
      std::copy(w.begin(), w.end(), basis[j + 1].begin());
      kernels::scale(1.0 / b, basis[j + 1]);
    }
    if (k == h.dim) invariant = true;

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(tri.alpha.data(), static_cast<Eigen::Index>(k));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(k > 0 ? k - 1 : 0));
    for (std::size_t i = 0; i + 1 < k; ++i) sub(static_cast<Eigen::Index>(i)) = tri.beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
      throw NumericalFailure("krylov_evolve: tridiagonal eigensolver failed at step " +
                             std::to_string(stats.steps));
    const Eigen::MatrixXd& q = es.eigenvectors();
    const Eigen::VectorXd& theta = es.eigenvalues();

    double step = std::min(trial, remaining);
    int halvings = 0;
    Eigen::VectorXcd coeff(static_cast<Eigen::Index>(k));
    double err = 0.0;
    for (;;) {
      Eigen::VectorXcd phase(static_cast<Eigen::Index>(k));
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(k); ++i)
        phase(i) = std::polar(q(0, i), -sign * step * theta(i));
      coeff = q.cast<cplx>() * phase;
      err = invariant ? 0.0 : beta0 * beta_last * std::abs(coeff(static_cast<Eigen::Index>(k - 1)));
      if (err <= options.step_tolerance) break;
      if (++halvings > options.max_halvings)
        throw NumericalFailure("krylov_evolve: step " + std::to_string(stats.steps) +
                               " did not converge, residual estimate " + std::to_string(err));
      step *= 0.5;
    }

    std::fill(psi.begin(), psi.end(), cplx{});
    for (std::size_t j = 0; j < k; ++j)
      kernels::axpy(beta0 * coeff(static_cast<Eigen::Index>(j)), basis[j], psi);

    remaining -= step;
    ++stats.steps;
    stats.max_error_estimate = std::max(stats.max_error_estimate, err);
    trial = halvings == 0 ? 2.0 * step : step;
  }
  return stats;
}

EigenPropagator::EigenPropagator(std::vector<double> dense, std::size_t n) : n_(n) {
  if (dense.size() != n * n) throw InvalidArgument("EigenPropagator: matrix is not square");
  Eigen::Map<const Eigen::MatrixXd> h(dense.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericalFailure("EigenPropagator: eigendecomposition failed");
  evals_.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  evecs_.assign(es.eigenvectors().data(), es.eigenvectors().data() + n * n);
}

EigenPropagator::EigenPropagator(const CsrMatrix& h) : EigenPropagator(to_dense(h), h.rows) {
  if (h.rows != h.cols) throw InvalidArgument("EigenPropagator: matrix is not square");
}

void EigenPropagator::apply(CVector& psi, double t) const {
  if (psi.size() != n_) throw InvalidArgument("EigenPropagator: dimension mismatch");
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::Map<const Eigen::MatrixXd> v(evecs_.data(), n, n);
  Eigen::Map<Eigen::VectorXcd> x(psi.data(), n);
  Eigen::VectorXd re = v.transpose() * x.real();
  Eigen::VectorXd im = v.transpose() * x.imag();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx c = cplx(re(i), im(i)) * std::polar(1.0, -evals_[static_cast<std::size_t>(i)] * t);
    re(i) = c.real();
    im(i) = c.imag();
  }
  Eigen::VectorXd out_re = v * re;
  Eigen::VectorXd out_im = v * im;
  for (Eigen::Index i = 0; i < n; ++i) x(i) = cplx(out_re(i), out_im(i));
}

CVector EigenPropagator::unitary(double t) const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::Map<const Eigen::MatrixXd> v(evecs_.data(), n, n);
  Eigen::VectorXd c(n), s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i) = std::cos(evals_[static_cast<std::size_t>(i)] * t);
    s(i) = -std::sin(evals_[static_cast<std::size_t>(i)] * t);
  }
  Eigen::MatrixXd re = v * c.asDiagonal() * v.transpose();
  Eigen::MatrixXd im = v * s.asDiagonal() * v.transpose();
  CVector u(n_ * n_);
  for (std::size_t k = 0; k < n_ * n_; ++k) u[k] = cplx(re.data()[k], im.data()[k]);
  return u;
}

CVector EigenPropagator::column(std::size_t k, double t) const {
  CVector out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    cplx acc = 0.0;
    for (std::size_t e = 0; e < n_; ++e)
      acc += evecs_[e * n_ + i] * evecs_[e * n_ + k] * std::polar(1.0, -evals_[e] * t);
    out[i] = acc;
  }
  return out;
}

}  // namespace ebus
