#pragma once

// Dense state-vector simulator used as the brute-force oracle.
//
// Basis convention: qubit (site) 1 is the most significant bit of the
// amplitude index. Sites are 1-based everywhere in the public API.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ebus/fermion_core.hpp"
#include "ebus/krylov.hpp"
#include "ebus/sparse.hpp"
#include "ebus/types.hpp"

namespace ebus::qsim {

inline constexpr int kMaxQubits = 24;
inline constexpr int kDenseHamiltonianCap = 14;
inline constexpr int kSparseHamiltonianCap = 20;
/// Largest register for which evolve() diagonalises exactly.
inline constexpr int kDenseEvolveCap = 10;

class PureState {
 public:
  /// |0...0> on n qubits.
  explicit PureState(int n_qubits);
  PureState(int n_qubits, CVector amplitudes);

  static PureState basis(int n_qubits, std::uint64_t index);
  /// Product state from a string over {0, 1, +, -}, site 1 first.
  static PureState product(std::string_view labels);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  std::span<const cplx> amplitudes() const { return amp_; }
  std::span<cplx> amplitudes() { return amp_; }
  CVector& data() { return amp_; }
  const CVector& data() const { return amp_; }
  cplx operator[](std::uint64_t i) const { return amp_[i]; }

  double norm() const;

 private:
  int n_ = 0;
  CVector amp_;
};

/// Bit of `site` (1-based) in an index over `n_qubits` qubits.
inline std::uint64_t site_mask(int n_qubits, int site) {
  return std::uint64_t{1} << (n_qubits - site);
}

cplx inner(const PureState& a, const PureState& b);
/// max_i |a_i - b_i|
double max_deviation(const PureState& a, const PureState& b);
/// max_i |a_i - e^{i theta} b_i| with theta chosen from the largest overlap.
double max_deviation_up_to_phase(const PureState& a, const PureState& b);

/// Couplings of H_s = sum zz_n Z_n Z_{n+1} + sum z_n Z_n - sum xy_n (X_n X_{n+1} + Y_n Y_{n+1}).
/// Z|1> = +|1>: an occupied site (one a-atom) counts as spin up.
struct SpinChainParams {
  std::vector<double> lambda_zz;  // N-1
  std::vector<double> lambda_z;   // N
  std::vector<double> lambda_xy;  // N-1

  int n_sites() const { return static_cast<int>(lambda_z.size()); }
};

/// lambda_xy = j/2, lambda_z = B/2 on every site, lambda_zz = 0.
SpinChainParams spin_params_from_chain(const fermion::ChainSpec& chain);

/// Sparse H_s. Throws CapacityError above `max_qubits`.
CsrMatrix build_spin_hamiltonian(const SpinChainParams& params,
                                 int max_qubits = kSparseHamiltonianCap);

enum class EvolveMethod { Eigendecomposition, Krylov };

struct EvolveReport {
  EvolveMethod method = EvolveMethod::Eigendecomposition;
  int steps = 0;
  double residual = 0.0;
};

/// exp(-i H t) for a fixed Hamiltonian, reusable across states and times.
/// Diagonalises up to kDenseEvolveCap qubits and uses Lanczos stepping
/// (tolerance 1e-10 per step) above that.
class Evolver {
 public:
  explicit Evolver(CsrMatrix h);
  Evolver(CsrMatrix h, EvolveMethod method);

  PureState evolve(const PureState& state, double t, EvolveReport* report = nullptr) const;
  EvolveMethod method() const { return method_; }
  const CsrMatrix& hamiltonian() const { return h_; }
  /// Only for the eigendecomposition method.
  const EigenPropagator* dense() const { return dense_.get(); }

 private:
  CsrMatrix h_;
  EvolveMethod method_;
  std::shared_ptr<const EigenPropagator> dense_;
};

PureState evolve(const PureState& state, const CsrMatrix& h, double t,
                 EvolveReport* report = nullptr);

PureState apply_hadamard(PureState state, int site);
PureState apply_cz(PureState state, int site_a, int site_b);
PureState apply_swap(PureState state, int site_a, int site_b);
/// Reverses the qubit order over sites first..last (inclusive); no phase.
PureState apply_reversal(PureState state, int first, int last);

/// Reduced state on a list of kept sites (first listed = most significant).
struct DensityMatrix {
  Eigen::MatrixXcd matrix;
  std::vector<int> local_dims;
  /// Local indices playing |0> and |1> per kept site, for embedding qubit
  /// targets into larger local spaces. Empty means plain qubits.
  std::vector<std::array<int, 2>> qubit_levels;

  double trace() const;
  double purity() const;
  double min_eigenvalue() const;
};

DensityMatrix partial_trace(const PureState& state, std::span<const int> keep_sites);

/// <target| rho |target>. The target is embedded through qubit_levels
/// when rho lives on larger local spaces; weight outside those levels
/// counts against F.
double fidelity(const DensityMatrix& rho, const PureState& target);

/// Principal eigenvector of a (nearly) pure qubit density matrix.
PureState dominant_state(const DensityMatrix& rho);

}  // namespace ebus::qsim
