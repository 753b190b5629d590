#include <doctest.h>

#include <cmath>

#include "ebus/bhm.hpp"
#include "ebus/kernels.hpp"
#include "ebus/qubit_sim.hpp"
#include "ebus/rng.hpp"

using namespace ebus;
using namespace ebus::bhm;

namespace {

// Brute-force count over all local-state tuples.
std::uint64_t brute_count(int n_sites, int n_max, int n_total) {
  std::vector<int> atoms;
  for (int a = 0; a <= n_max; ++a)
    for (int b = 0; a + b <= n_max; ++b) atoms.push_back(a + b);
  std::uint64_t count = 0;
  std::vector<std::size_t> digit(static_cast<std::size_t>(n_sites), 0);
  while (true) {
    int total = 0;
    for (auto d : digit) total += atoms[d];
    if (total == n_total) ++count;
    std::size_t k = 0;
    while (k < digit.size() && ++digit[k] == atoms.size()) digit[k++] = 0;
    if (k == digit.size()) break;
  }
  return count;
}

BhmConfig small(int n, int n_max = 2) {
  BhmConfig c;
  c.n_sites = n;
  c.n_max = n_max;
  return c;
}

}  // namespace

TEST_SUITE("bhm") {

TEST_CASE("configuration") {
  const auto c = small(6);
  CHECK(c.j_scale() == doctest::Approx(16.0 / (26.0 * 6.0)));
  CHECK(std::abs(c.tau() - kPi / c.j_scale()) < 1e-12);
  CHECK(std::abs(c.tau() - 26.0 * 6.0 * kPi / 16.0) < 1e-12);
  CHECK(c.field_value() == doctest::Approx(2.5 * c.j_scale()));
  const auto a = c.alpha();
  REQUIRE(a.size() == 5);
  CHECK(a[0] == doctest::Approx(2.0 * std::sqrt(5.0) / 6.0));
  CHECK(a[2] == doctest::Approx(1.0));
  auto bad = c;
  bad.interaction = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = c;
  bad.n_max = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("local state order") {
  const BosonicBasis b(1, 2, 2);
  const auto& l = b.local_states();
  REQUIRE(l.size() == 6);
  CHECK((l[0].n_a == 0 && l[0].n_b == 0));
  CHECK((l[1].n_a == 0 && l[1].n_b == 1));
  CHECK((l[2].n_a == 0 && l[2].n_b == 2));
  CHECK((l[3].n_a == 1 && l[3].n_b == 0));
  CHECK((l[4].n_a == 1 && l[4].n_b == 1));
  CHECK((l[5].n_a == 2 && l[5].n_b == 0));
  CHECK(b.qubit_level(0) == 1);
  CHECK(b.qubit_level(1) == 3);
  CHECK(b.dim() == 3);
}

TEST_CASE("basis dimensions") {
  CHECK(BosonicBasis(2, 2, 2).dim() == 10);
  CHECK(BosonicBasis(1, 1, 1).dim() == 2);
  CHECK(BosonicBasis(6, 1, 6).dim() == 64);
  for (int n = 1; n <= 6; ++n)
    for (int m = 1; m <= 3; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const auto want = brute_count(n, m, n);
      CHECK(count_states(n, m, n) == want);
      CHECK(BosonicBasis(n, m, n).dim() == want);
    }
  CHECK_THROWS_AS(BosonicBasis(6, 2, 6, 100), CapacityError);
}

TEST_CASE("index maps are bijective") {
  const BosonicBasis b(4, 2, 4);
  std::vector<int> locals(4);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    for (int s = 1; s <= 4; ++s) locals[static_cast<std::size_t>(s - 1)] = b.local_index(i, s);
    CHECK(b.index_of(locals) == i);
    CHECK(b.index_of_key(b.key(i)) == i);
    if (i > 0) CHECK(b.key(i - 1) < b.key(i));
  }
  const std::vector<int> wrong{0, 0, 0, 0};
  CHECK_FALSE(b.index_of(wrong).has_value());
}

TEST_CASE("single-site diagonal energies") {
  const BosonicBasis b(1, 2, 2);
  BhmCouplings c{{}, {}, 3.0, 5.0, 1.5, 0.4};
  const auto d = to_dense(build_bhm(b, c));
  // (0,2), (1,1), (2,0)
  CHECK(d[0] == doctest::Approx(5.0 - 0.4));
  CHECK(d[4] == doctest::Approx(1.5));
  CHECK(d[8] == doctest::Approx(3.0 + 0.4));
}

TEST_CASE("two-site hopping elements") {
  const BosonicBasis b(2, 2, 2);
  BhmCouplings c{{0.7}, {0.0}, 0.0, 0.0, 0.0, 0.0};
  const auto h = build_bhm(b, c);
  // a-atom on site 1 next to a-atom on site 2 hops to double occupancy: -t sqrt(2).
  const std::vector<int> aa{3, 3}, a2{5, 0}, ab{3, 1}, ba{1, 3};
  const auto i = *b.index_of(aa), j = *b.index_of(a2);
  const auto d = to_dense(h);
  CHECK(d[j * b.dim() + i] == doctest::Approx(-0.7 * std::sqrt(2.0)));
  // b-atoms do not hop when t_b = 0.
  CHECK(d[*b.index_of(ba) * b.dim() + *b.index_of(ab)] == doctest::Approx(0.0));
}

TEST_CASE("hamiltonian is symmetric and conserves both species") {
  const auto cfg = small(4);
  const auto basis = BosonicBasis::unit_filling(cfg);
  auto c = engineered_couplings(cfg);
  c.t_a[1] *= 1.3;
  c.u_b *= 0.9;
  const auto h = build_bhm(basis, c);
  CHECK(symmetry_defect(h) < 1e-12);
  const auto na = basis.a_counts();
  for (std::size_t r = 0; r < h.rows; ++r)
    for (std::size_t k = h.row_ptr[r]; k < h.row_ptr[r + 1]; ++k) CHECK(na[r] == na[h.col[k]]);

  c.t_a.assign(c.t_a.size(), 0.0);
  c.t_b.assign(c.t_b.size(), 0.0);
  const auto diag = build_bhm(basis, c);
  for (std::size_t r = 0; r < diag.rows; ++r)
    for (std::size_t k = diag.row_ptr[r]; k < diag.row_ptr[r + 1]; ++k) CHECK(diag.col[k] == r);
}

TEST_CASE("matrix-free operator matches assembly") {
  const auto cfg = small(5);
  const auto basis = BosonicBasis::unit_filling(cfg);
  const BhmTerms terms(basis);
  const auto c = engineered_couplings(cfg);
  const auto h = terms.assemble(c);
  const auto op = terms.op(c);
  Rng rng(1);
  CVector x(basis.dim()), y1(basis.dim()), y2(basis.dim());
  for (auto& v : x) v = {rng.normal(), rng.normal()};
  kernels::csr_matvec(h, x, y1);
  op.apply(x, y2);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(y1[i] - y2[i]));
  CHECK(d < 1e-12);
}

TEST_CASE("engineered couplings") {
  const auto cfg = small(6);
  const auto c = engineered_couplings(cfg);
  const auto a = cfg.alpha();
  for (std::size_t n = 0; n < a.size(); ++n) {
    CHECK(c.t_a[n] == doctest::Approx(std::sqrt(a[n])));
    CHECK(c.t_b[n] == c.t_a[n]);
  }
  CHECK(c.u_a == 26.0);
  CHECK(c.u_b == 26.0);
  CHECK(c.u_ab == 13.0);
  CHECK(c.field == doctest::Approx(cfg.field_value()));
}

TEST_CASE("spin couplings from the lattice") {
  const std::vector<double> t{0.5, 0.8};
  const auto p = spin_couplings_from_bhm(t, t, 10.0, 10.0, 5.0, 0.3);
  for (int n = 0; n < 2; ++n) {
    CHECK(std::abs(p.lambda_zz[n]) < 1e-15);
    CHECK(p.lambda_xy[n] == doctest::Approx(2 * t[n] * t[n] / 10.0));
  }
  for (double z : p.lambda_z) CHECK(z == doctest::Approx(0.15));

  const std::vector<double> zero{0.0, 0.0};
  const auto q = spin_couplings_from_bhm(t, zero, 10.0, 10.0, 5.0, 0.3);
  CHECK(q.lambda_xy[0] == 0.0);
  CHECK(q.lambda_z[0] == doctest::Approx(4 * 0.25 / 10.0 + 0.15));
  CHECK(q.lambda_z[1] == doctest::Approx(4 * 0.64 / 10.0 + 0.15));

  CHECK_THROWS_AS(spin_couplings_from_bhm(t, t, 0.0, 10.0, 5.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(spin_couplings_from_bhm(t, t, 10.0, 10.0, -1.0, 0.0), InvalidArgument);
}

TEST_CASE("hardcore lattice equals the field-only spin chain") {
  // With one atom per site and n_max = 1 no atom can move, so only the
  // field term survives: H = (B/2) sum Z with Z|1> = +|1> and |1> = a-atom.
  const int n = 5;
  const auto cfg = small(n, 1);
  const auto basis = BosonicBasis::unit_filling(cfg);
  REQUIRE(basis.dim() == 32);
  const auto c = engineered_couplings(cfg);
  const auto h = build_bhm(basis, c);

  qsim::SpinChainParams p{std::vector<double>(n - 1, 0.0), std::vector<double>(n, c.field / 2),
                          std::vector<double>(n - 1, 0.0)};
  const auto hs = qsim::build_spin_hamiltonian(p);

  Rng rng(5);
  CVector v(32);
  for (auto& x : v) x = {rng.normal(), rng.normal()};
  const double nv = kernels::norm(v);
  for (auto& x : v) x /= nv;
  const qsim::PureState psi(n, v);
  const double t = cfg.tau();

  CVector lattice = embed_qubit_state(psi, basis);
  krylov_evolve(as_operator(h), lattice, t);
  const auto spin = qsim::evolve(psi, hs, t);
  const auto mapped = embed_qubit_state(spin, basis);
  double d = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) d = std::max(d, std::abs(mapped[i] - lattice[i]));
  CHECK(d < 1e-8);
}

TEST_CASE("reduced density on the singly-occupied sector") {
  const auto cfg = small(3);
  const auto basis = BosonicBasis::unit_filling(cfg);
  const auto psi = qsim::PureState::product("+0-");
  const auto lattice = embed_qubit_state(psi, basis);
  const std::vector<int> ends{1, 3};
  const auto rho = reduced_density(lattice, basis, ends);
  CHECK(rho.local_dims == std::vector<int>{6, 6});
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.purity() == doctest::Approx(1.0));
  CHECK(qsim::fidelity(rho, qsim::PureState::product("+-")) == doctest::Approx(1.0));
  CHECK(qsim::fidelity(rho, qsim::PureState::product("++")) == doctest::Approx(0.0).epsilon(1e-12));
}

}
