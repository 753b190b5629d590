#include <doctest.h>
#include <omp.h>

#include <cmath>

#include "ebus/kernels.hpp"
#include "ebus/rng.hpp"
#include "ebus/sparse.hpp"

using namespace ebus;

namespace {

CsrMatrix random_symmetric(std::size_t n, double density, Rng& rng) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (rng.uniform() < density) d[i][j] = d[j][i] = rng.normal();
  return csr_from_dense(d);
}

CVector random_vector(std::size_t n, Rng& rng) {
  CVector v(n);
  for (auto& x : v) x = {rng.normal(), rng.normal()};
  return v;
}

double max_diff(const CVector& a, const CVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("builder sums duplicates and keeps rows sorted") {
  CsrBuilder b(3, 3);
  b.add(0, 2, 1.0);
  b.add(0, 0, 2.0);
  b.add(0, 2, 0.5);
  b.add(2, 1, -1.0);
  const auto m = b.finish();
  REQUIRE(m.nnz() == 3);
  CHECK(m.row_ptr == std::vector<std::size_t>{0, 2, 2, 3});
  CHECK(m.col[0] == 0);
  CHECK(m.val[1] == doctest::Approx(1.5));
  CHECK(symmetry_defect(m) == doctest::Approx(1.5));
}

TEST_CASE("matvec against dense product") {
  Rng rng(3);
  const auto a = random_symmetric(40, 0.2, rng);
  const auto x = random_vector(40, rng);
  const auto dense = to_dense(a);
  CVector y(40), want(40, cplx{});
  kernels::csr_matvec(a, x, y);
  for (std::size_t j = 0; j < 40; ++j)
    for (std::size_t i = 0; i < 40; ++i) want[i] += dense[j * 40 + i] * x[j];
  CHECK(max_diff(y, want) < 1e-12);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  Rng rng(5);
  const std::size_t n = 9000;  // spans several reduction blocks
  CsrBuilder b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    b.add(i, i, rng.normal());
    if (i + 1 < n) b.add(i, i + 1, 1.0);
    if (i >= 1) b.add(i, i - 1, 1.0);
  }
  const auto a = b.finish();
  const auto x = random_vector(n, rng);
  const auto z = random_vector(n, rng);

  CVector y1(n), y2(n);
  kernels::csr_matvec(a, x, y1);
  kernels::reference::csr_matvec(a, x, y2);
  CHECK(max_diff(y1, y2) == 0.0);

  std::vector<std::uint16_t> term(a.nnz());
  for (std::size_t k = 0; k < term.size(); ++k) term[k] = static_cast<std::uint16_t>(k % 3);
  const std::vector<double> w{0.5, -2.0, 1.25};
  std::vector<double> diag(n);
  for (auto& d : diag) d = rng.normal();
  kernels::weighted_matvec(a, term, w, diag, x, y1);
  kernels::reference::weighted_matvec(a, term, w, diag, x, y2);
  CHECK(max_diff(y1, y2) == 0.0);

  // Blocked sums reorder additions, so only agreement to rounding is expected.
  CHECK(std::abs(kernels::dot(x, z) - kernels::reference::dot(x, z)) < 1e-12 * n);
  CHECK(kernels::norm(x) == doctest::Approx(kernels::reference::norm(x)).epsilon(1e-13));

  CVector p = z, q = z;
  kernels::axpy({0.3, -0.1}, x, p);
  kernels::reference::axpy({0.3, -0.1}, x, q);
  CHECK(max_diff(p, q) == 0.0);
  kernels::scale({0.0, 2.0}, p);
  kernels::reference::scale({0.0, 2.0}, q);
  CHECK(max_diff(p, q) == 0.0);
}

TEST_CASE("weighted matvec equals the assembled matrix") {
  // 3x3 pattern, entries tagged 0 or 1.
  CsrBuilder b(3, 3);
  b.add(0, 1, 1.0);
  b.add(1, 0, 1.0);
  b.add(1, 2, 2.0);
  b.add(2, 1, 2.0);
  const auto a = b.finish();
  const std::vector<std::uint16_t> term{0, 0, 1, 1};
  const std::vector<double> w{3.0, -1.0};
  const std::vector<double> diag{1.0, 2.0, 3.0};
  const CVector x{{1, 0}, {0, 1}, {2, -1}};
  CVector y(3);
  kernels::weighted_matvec(a, term, w, diag, x, y);
  // H = [[1,3,0],[3,2,-2],[0,-2,3]]
  CHECK(std::abs(y[0] - cplx(1, 3)) < 1e-14);
  CHECK(std::abs(y[1] - (cplx(3, 0) + cplx(0, 2) - cplx(4, -2))) < 1e-14);
  CHECK(std::abs(y[2] - (cplx(0, -2) + cplx(6, -3))) < 1e-14);
}

TEST_CASE("reductions do not depend on thread count") {
  Rng rng(8);
  const auto x = random_vector(50000, rng);
  const auto z = random_vector(50000, rng);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const cplx d1 = kernels::dot(x, z);
  const double n1 = kernels::norm(x);
  omp_set_num_threads(4);
  const cplx d4 = kernels::dot(x, z);
  const double n4 = kernels::norm(x);
  omp_set_num_threads(saved);
  CHECK(d1 == d4);
  CHECK(n1 == n4);
}

TEST_CASE("cz mask and trailing unitary match reference") {
  Rng rng(9);
  auto a = random_vector(64, rng);
  auto b = a;
  kernels::apply_cz_mask(a, 0b100, 0b001);
  kernels::reference::apply_cz_mask(b, 0b100, 0b001);
  CHECK(max_diff(a, b) == 0.0);
  const auto u = random_vector(16, rng);  // 4x4 on the last two qubits
  kernels::apply_trailing_unitary(u, 4, a);
  kernels::reference::apply_trailing_unitary(u, 4, b);
  CHECK(max_diff(a, b) < 1e-15);
}

TEST_CASE("cz mask flips exactly the doubly-set amplitudes") {
  CVector v(8, cplx{1.0, 0.0});
  kernels::apply_cz_mask(v, 0b100, 0b010);
  for (std::uint64_t i = 0; i < 8; ++i) CHECK(v[i].real() == ((i & 0b110) == 0b110 ? -1.0 : 1.0));
}

}
