// Serial reference kernels against the OpenMP versions on the two operator
// families the simulator actually runs: the BHM lattice and the spin chain.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "ebus/bhm.hpp"
#include "ebus/fermion_core.hpp"
#include "ebus/kernels.hpp"
#include "ebus/qubit_sim.hpp"
#include "ebus/rng.hpp"

namespace {

using namespace ebus;

struct Lattice {
  bhm::BosonicBasis basis;
  bhm::BhmTerms terms;
  CsrMatrix h;
  std::vector<double> weights;
  std::vector<double> diag;
  CVector x, y;

  explicit Lattice(int n)
      : basis(n, 2, n), terms(basis) {
    bhm::BhmConfig cfg;
    cfg.n_sites = n;
    const auto c = bhm::engineered_couplings(cfg);
    h = terms.assemble(c);
    weights = terms.hop_weights(c);
    diag = terms.diagonal(c);
    x = random(basis.dim());
    y.resize(basis.dim());
  }

  static CVector random(std::size_t n) {
    Rng rng(1);
    CVector v(n);
    for (auto& z : v) z = {rng.normal(), rng.normal()};
    return v;
  }
};

Lattice& lattice(int n) {
  static std::map<int, std::unique_ptr<Lattice>> cache;
  auto& p = cache[n];
  if (!p) p = std::make_unique<Lattice>(n);
  return *p;
}

struct Spin {
  CsrMatrix h;
  CVector x, y;
  explicit Spin(int n)
      : h(qsim::build_spin_hamiltonian(qsim::spin_params_from_chain(fermion::build_resonant_chain(n, 1.0)))),
        x(Lattice::random(h.rows)),
        y(h.rows) {}
};

Spin& spin(int n) {
  static std::map<int, std::unique_ptr<Spin>> cache;
  auto& p = cache[n];
  if (!p) p = std::make_unique<Spin>(n);
  return *p;
}

template <bool Parallel>
void BM_BhmCsrMatvec(benchmark::State& st) {
  auto& l = lattice(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::csr_matvec(l.h, l.x, l.y);
    else
      kernels::reference::csr_matvec(l.h, l.x, l.y);
    benchmark::DoNotOptimize(l.y.data());
  }
  st.counters["dim"] = static_cast<double>(l.basis.dim());
}

template <bool Parallel>
void BM_BhmWeightedMatvec(benchmark::State& st) {
  auto& l = lattice(static_cast<int>(st.range(0)));
  const auto& pat = l.terms.hopping_pattern();
  const auto term = l.terms.hopping_terms();
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::weighted_matvec(pat, term, l.weights, l.diag, l.x, l.y);
    else
      kernels::reference::weighted_matvec(pat, term, l.weights, l.diag, l.x, l.y);
    benchmark::DoNotOptimize(l.y.data());
  }
  st.counters["dim"] = static_cast<double>(l.basis.dim());
}

template <bool Parallel>
void BM_SpinMatvec(benchmark::State& st) {
  auto& s = spin(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::csr_matvec(s.h, s.x, s.y);
    else
      kernels::reference::csr_matvec(s.h, s.x, s.y);
    benchmark::DoNotOptimize(s.y.data());
  }
  st.counters["dim"] = static_cast<double>(s.h.rows);
}

template <bool Parallel>
void BM_Dot(benchmark::State& st) {
  auto& s = spin(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    cplx d = Parallel ? kernels::dot(s.x, s.x) : kernels::reference::dot(s.x, s.x);
    benchmark::DoNotOptimize(d);
  }
}

}  // namespace

BENCHMARK(BM_BhmCsrMatvec<false>)->Name("bhm_csr_matvec/serial")->Arg(6)->Arg(8);
BENCHMARK(BM_BhmCsrMatvec<true>)->Name("bhm_csr_matvec/openmp")->Arg(6)->Arg(8);
BENCHMARK(BM_BhmWeightedMatvec<false>)->Name("bhm_weighted_matvec/serial")->Arg(6)->Arg(8);
BENCHMARK(BM_BhmWeightedMatvec<true>)->Name("bhm_weighted_matvec/openmp")->Arg(6)->Arg(8);
BENCHMARK(BM_SpinMatvec<false>)->Name("spin_matvec/serial")->Arg(14)->Arg(18);
BENCHMARK(BM_SpinMatvec<true>)->Name("spin_matvec/openmp")->Arg(14)->Arg(18);
BENCHMARK(BM_Dot<false>)->Name("dot/serial")->Arg(18);
BENCHMARK(BM_Dot<true>)->Name("dot/openmp")->Arg(18);

BENCHMARK_MAIN();
