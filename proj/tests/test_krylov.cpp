#include <doctest.h>

#include <cmath>

#include "ebus/krylov.hpp"
#include "ebus/kernels.hpp"
#include "ebus/rng.hpp"

using namespace ebus;

namespace {

// exp(-i H t) for H = [[a, b], [b, -a]]: cos(wt) - i sin(wt) H / w.
CVector two_level(double a, double b, double t, const CVector& psi) {
  const double w = std::hypot(a, b);
  const cplx c = std::cos(w * t), s = cplx(0, -std::sin(w * t) / w);
  return {c * psi[0] + s * (a * psi[0] + b * psi[1]), c * psi[1] + s * (b * psi[0] - a * psi[1])};
}

CsrMatrix random_banded(std::size_t n, Rng& rng) {
  CsrBuilder b(n, n);
  std::vector<std::vector<double>> band(n, std::vector<double>(3, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    band[i][0] = rng.normal();
    band[i][1] = rng.normal();
    band[i][2] = rng.normal();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 3) b.add(i, i - 3, band[i - 3][2]);
    if (i >= 1) b.add(i, i - 1, band[i - 1][1]);
    b.add(i, i, band[i][0]);
    if (i + 1 < n) b.add(i, i + 1, band[i][1]);
    if (i + 3 < n) b.add(i, i + 3, band[i][2]);
  }
  return b.finish();
}

}  // namespace

TEST_SUITE("krylov") {

TEST_CASE("two-level closed form") {
  const auto h = csr_from_dense({{0.7, -1.3}, {-1.3, -0.7}});
  const CVector psi0{{0.6, 0.0}, {0.0, 0.8}};
  for (double t : {0.1, 1.0, 7.5}) {
    const auto want = two_level(0.7, -1.3, t, psi0);
    CVector k = psi0;
    krylov_evolve(as_operator(h), k, t);
    CVector e = psi0;
    EigenPropagator(h).apply(e, t);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(k[i] - want[i]) < 1e-10);
      CHECK(std::abs(e[i] - want[i]) < 1e-12);
    }
  }
}

TEST_CASE("lanczos agrees with exact diagonalisation") {
  Rng rng(21);
  const auto h = random_banded(300, rng);
  CVector psi(300);
  for (auto& x : psi) x = {rng.normal(), rng.normal()};
  const double n0 = kernels::norm(psi);
  kernels::scale(1.0 / n0, psi);

  CVector k = psi, e = psi;
  const auto stats = krylov_evolve(as_operator(h), k, 3.0, {20, 1e-12});
  EigenPropagator(h).apply(e, 3.0);
  double d = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) d = std::max(d, std::abs(k[i] - e[i]));
  CHECK(d < 1e-9);
  CHECK(std::abs(kernels::norm(k) - 1.0) < 1e-12);
  CHECK(stats.steps >= 1);
  CHECK(stats.max_error_estimate <= 1e-12);
}

TEST_CASE("unitary columns are orthonormal and eigenvalues sorted") {
  const auto h = csr_from_dense({{1, 2, 0}, {2, 0, -1}, {0, -1, 3}});
  const EigenPropagator p(h);
  const auto u = p.unitary(0.8);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      cplx s{};
      for (std::size_t i = 0; i < 3; ++i) s += std::conj(u[a * 3 + i]) * u[b * 3 + i];
      CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-13);
    }
  const auto ev = p.eigenvalues();
  CHECK(std::is_sorted(ev.begin(), ev.end()));
  CHECK(ev[0] + ev[1] + ev[2] == doctest::Approx(4.0));
  const auto col = p.column(1, 0.8);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(col[i] - u[3 + i]) < 1e-14);
}

TEST_CASE("bad input is rejected") {
  const auto h = csr_from_dense({{1, 0}, {0, 1}});
  CVector psi(3);
  CHECK_THROWS_AS(krylov_evolve(as_operator(h), psi, 1.0), InvalidArgument);
  CVector ok{{1, 0}, {0, 0}};
  CHECK_THROWS_AS(krylov_evolve(as_operator(h), ok, 1.0, {1, 1e-10}), InvalidArgument);
}

}
