#include "ebus/qubit_sim.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "ebus/kernels.hpp"

namespace ebus::qsim {

namespace {

void check_qubits(int n) {
  if (n < 0 || n > kMaxQubits) throw CapacityError("qubit count " + std::to_string(n) + " exceeds cap");
}

void check_site(const PureState& s, int site) {
  if (site < 1 || site > s.n_qubits())
    throw InvalidArgument("site " + std::to_string(site) + " out of range 1.." + std::to_string(s.n_qubits()));
}

int log2_dim(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) throw InvalidArgument("dimension is not a power of two");
  return std::countr_zero(dim);
}

}  // namespace

PureState::PureState(int n_qubits) : n_(n_qubits) {
  check_qubits(n_qubits);
  amp_.assign(std::size_t{1} << n_qubits, cplx{});
  amp_[0] = 1.0;
}

PureState::PureState(int n_qubits, CVector amplitudes) : n_(n_qubits), amp_(std::move(amplitudes)) {
  check_qubits(n_qubits);
  if (amp_.size() != (std::size_t{1} << n_qubits)) throw InvalidArgument("amplitude count does not match qubit count");
}

PureState PureState::basis(int n_qubits, std::uint64_t index) {
  PureState s(n_qubits);
  if (index >= s.dim()) throw InvalidArgument("basis index out of range");
  s.amp_[0] = 0.0;
  s.amp_[index] = 1.0;
  return s;
}

PureState PureState::product(std::string_view labels) {
  const int n = static_cast<int>(labels.size());
  check_qubits(n);
  CVector amp(std::size_t{1} << n, cplx{1.0});
  const double r = 1.0 / std::sqrt(2.0);
  for (int s = 0; s < n; ++s) {
    cplx zero, one;
    switch (labels[static_cast<std::size_t>(s)]) {
      case '0': zero = 1.0; one = 0.0; break;
      case '1': zero = 0.0; one = 1.0; break;
      case '+': zero = r; one = r; break;
      case '-': zero = r; one = -r; break;
      default: throw InvalidArgument(std::string("unknown product-state label '") + labels[static_cast<std::size_t>(s)] + "'");
    }
    const std::uint64_t mask = site_mask(n, s + 1);
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] *= (i & mask) ? one : zero;
  }
  return PureState(n, std::move(amp));
}

double PureState::norm() const { return kernels::norm(amp_); }

cplx inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("inner: dimension mismatch");
  return kernels::dot(a.amplitudes(), b.amplitudes());
}

double max_deviation(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("max_deviation: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double max_deviation_up_to_phase(const PureState& a, const PureState& b) {
  const cplx ov = inner(b, a);
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx{1.0};
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - phase * b[i]));
  return worst;
}

SpinChainParams spin_params_from_chain(const fermion::ChainSpec& chain) {
  const auto n = static_cast<std::size_t>(chain.n_sites);
  if (chain.couplings.size() + 1 != n || chain.onsite.size() != n)
    throw InvalidArgument("spin_params_from_chain: inconsistent chain");
  SpinChainParams p;
  p.lambda_zz.assign(n - 1, 0.0);
  p.lambda_xy.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) p.lambda_xy[i] = 0.5 * chain.couplings[i];
  p.lambda_z.assign(n, 0.5 * chain.field);
  return p;
}

CsrMatrix build_spin_hamiltonian(const SpinChainParams& params, int max_qubits) {
  const int n = params.n_sites();
  if (n < 1) throw InvalidArgument("spin chain needs at least one site");
  if (n > max_qubits || n > kSparseHamiltonianCap)
    throw CapacityError("spin chain of " + std::to_string(n) + " sites exceeds the configured cap of " +
                        std::to_string(std::min(max_qubits, kSparseHamiltonianCap)));
  if (params.lambda_zz.size() + 1 != static_cast<std::size_t>(n) ||
      params.lambda_xy.size() + 1 != static_cast<std::size_t>(n))
    throw InvalidArgument("spin chain arrays have inconsistent lengths");

  const std::size_t dim = std::size_t{1} << n;
  CsrBuilder b(dim, dim);
  auto spin = [&](std::size_t i, int site) { return (i & site_mask(n, site)) ? 1.0 : -1.0; };
  for (std::size_t i = 0; i < dim; ++i) {
    double diag = 0.0;
    for (int s = 1; s <= n; ++s) diag += params.lambda_z[static_cast<std::size_t>(s - 1)] * spin(i, s);
    for (int s = 1; s < n; ++s) diag += params.lambda_zz[static_cast<std::size_t>(s - 1)] * spin(i, s) * spin(i, s + 1);
    // XX + YY = 2 (s+ s- + s- s+) flips an antiparallel pair with amplitude 2.
    for (int s = 1; s < n; ++s) {
      const std::uint64_t pair = site_mask(n, s) | site_mask(n, s + 1);
      const std::uint64_t bits = i & pair;
      if (bits != 0 && bits != pair) {
        const double xy = params.lambda_xy[static_cast<std::size_t>(s - 1)];
        if (xy != 0.0) b.add(i, i ^ pair, -2.0 * xy);
      }
    }
    if (diag != 0.0) b.add(i, i, diag);
  }
  return b.finish();
}

Evolver::Evolver(CsrMatrix h) : Evolver(std::move(h), EvolveMethod::Eigendecomposition) {}

Evolver::Evolver(CsrMatrix h, EvolveMethod method) : h_(std::move(h)), method_(method) {
  if (h_.rows != h_.cols) throw InvalidArgument("Hamiltonian is not square");
  if (log2_dim(h_.rows) > kDenseEvolveCap) method_ = EvolveMethod::Krylov;
  if (method_ == EvolveMethod::Eigendecomposition) dense_ = std::make_shared<EigenPropagator>(h_);
}

PureState Evolver::evolve(const PureState& state, double t, EvolveReport* report) const {
  if (state.dim() != h_.rows) throw InvalidArgument("evolve: state and Hamiltonian dimensions differ");
  PureState out = state;
  if (dense_) {
    dense_->apply(out.data(), t);
    if (report) *report = {EvolveMethod::Eigendecomposition, 1, 0.0};
    return out;
  }
  KrylovOptions opts;
  opts.step_tolerance = 1e-10;
  const auto stats = krylov_evolve(as_operator(h_), out.data(), t, opts);
  if (report) *report = {EvolveMethod::Krylov, stats.steps, stats.max_error_estimate};
  return out;
}

PureState evolve(const PureState& state, const CsrMatrix& h, double t, EvolveReport* report) {
  if (t == 0.0) {
    if (state.dim() != h.rows) throw InvalidArgument("evolve: state and Hamiltonian dimensions differ");
    if (report) *report = {};
    return state;
  }
  return Evolver(h).evolve(state, t, report);
}

PureState apply_hadamard(PureState state, int site) {
  check_site(state, site);
  const std::uint64_t mask = site_mask(state.n_qubits(), site);
  const double r = 1.0 / std::sqrt(2.0);
  auto amp = state.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (i & mask) continue;
    const cplx a0 = amp[i], a1 = amp[i | mask];
    amp[i] = r * (a0 + a1);
    amp[i | mask] = r * (a0 - a1);
  }
  return state;
}

PureState apply_cz(PureState state, int site_a, int site_b) {
  check_site(state, site_a);
  check_site(state, site_b);
  if (site_a == site_b) throw InvalidArgument("apply_cz: sites must differ");
  kernels::apply_cz_mask(state.amplitudes(), site_mask(state.n_qubits(), site_a), site_mask(state.n_qubits(), site_b));
  return state;
}

PureState apply_swap(PureState state, int site_a, int site_b) {
  check_site(state, site_a);
  check_site(state, site_b);
  if (site_a == site_b) throw InvalidArgument("apply_swap: sites must differ");
  const std::uint64_t ma = site_mask(state.n_qubits(), site_a);
  const std::uint64_t mb = site_mask(state.n_qubits(), site_b);
  auto amp = state.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i)
    if ((i & ma) && !(i & mb)) std::swap(amp[i], amp[(i ^ ma) | mb]);
  return state;
}

PureState apply_reversal(PureState state, int first, int last) {
  check_site(state, first);
  check_site(state, last);
  if (first > last) throw InvalidArgument("apply_reversal: empty range");
  for (int a = first, b = last; a < b; ++a, --b) state = apply_swap(std::move(state), a, b);
  return state;
}

double DensityMatrix::trace() const { return matrix.trace().real(); }

double DensityMatrix::purity() const { return (matrix * matrix).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix partial_trace(const PureState& state, std::span<const int> keep_sites) {
  const int n = state.n_qubits();
  if (keep_sites.empty()) throw InvalidArgument("partial_trace: keep_sites is empty");
  std::uint64_t keep_mask = 0;
  for (int s : keep_sites) {
    check_site(state, s);
    if (keep_mask & site_mask(n, s)) throw InvalidArgument("partial_trace: repeated site");
    keep_mask |= site_mask(n, s);
  }
  const int k = static_cast<int>(keep_sites.size());
  const auto dk = static_cast<Eigen::Index>(1) << k;
  const auto de = static_cast<Eigen::Index>(1) << (n - k);

  // Psi(kept, env); env index packs the remaining bits in site order.
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(dk, de);
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    std::uint64_t a = 0, e = 0;
    for (int s : keep_sites) a = (a << 1) | ((i & site_mask(n, s)) ? 1u : 0u);
    for (int s = 1; s <= n; ++s)
      if (!(keep_mask & site_mask(n, s))) e = (e << 1) | ((i & site_mask(n, s)) ? 1u : 0u);
    psi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(e)) = state[i];
  }
  DensityMatrix rho;
  rho.matrix = psi * psi.adjoint();
  rho.local_dims.assign(static_cast<std::size_t>(k), 2);
  return rho;
}

double fidelity(const DensityMatrix& rho, const PureState& target) {
  const int k = static_cast<int>(rho.local_dims.size());
  if (target.n_qubits() != k) throw InvalidArgument("fidelity: target and density matrix cover different site counts");
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(rho.matrix.rows());
  const bool plain = rho.qubit_levels.empty();
  if (plain) {
    for (int d : rho.local_dims)
      if (d != 2) throw InvalidArgument("fidelity: no canonical embedding of a qubit target into local dimension " + std::to_string(d));
    for (std::uint64_t i = 0; i < target.dim(); ++i) t(static_cast<Eigen::Index>(i)) = target[i];
  } else {
    if (rho.qubit_levels.size() != rho.local_dims.size()) throw InvalidArgument("fidelity: malformed qubit levels");
    for (std::uint64_t i = 0; i < target.dim(); ++i) {
      std::uint64_t idx = 0;
      for (int s = 0; s < k; ++s) {
        const int bit = (i >> (k - 1 - s)) & 1u;
        idx = idx * static_cast<std::uint64_t>(rho.local_dims[static_cast<std::size_t>(s)]) +
              static_cast<std::uint64_t>(rho.qubit_levels[static_cast<std::size_t>(s)][static_cast<std::size_t>(bit)]);
      }
      t(static_cast<Eigen::Index>(idx)) = target[i];
    }
  }
  if (t.size() != rho.matrix.rows()) throw InvalidArgument("fidelity: dimension mismatch");
  return (t.adjoint() * rho.matrix * t)(0, 0).real();
}

PureState dominant_state(const DensityMatrix& rho) {
  for (int d : rho.local_dims)
    if (d != 2) throw InvalidArgument("dominant_state: expects a qubit density matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix);
  if (es.info() != Eigen::Success) throw NumericalFailure("dominant_state: eigensolver failed");
  const Eigen::Index top = rho.matrix.rows() - 1;
  Eigen::VectorXcd v = es.eigenvectors().col(top);
  CVector amp(v.data(), v.data() + v.size());
  return PureState(static_cast<int>(rho.local_dims.size()), std::move(amp));
}

}  // namespace ebus::qsim
