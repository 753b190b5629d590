#pragma once

// Two-species Bose-Hubbard lattice: a-atoms play |1>, b-atoms play |0>.
//
//   H = sum_n [ U_a/2 n_a(n_a-1) + U_b/2 n_b(n_b-1) + U_ab n_a n_b + B/2 (n_a - n_b) ]
//     - sum_n [ t^a_n a+_n a_{n+1} + t^b_n b+_n b_{n+1} + h.c. ]
//
// Engineered point: U_a = U_b = 2 U_ab = U, t^a_n = t^b_n = T sqrt(alpha_n),
// which to order T^2/U is the XY chain with J = 16 T^2 / (U N).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ebus/krylov.hpp"
#include "ebus/qubit_sim.hpp"
#include "ebus/sparse.hpp"
#include "ebus/types.hpp"

namespace ebus::bhm {

inline constexpr std::size_t kDefaultDimensionCap = 5'000'000;

struct BhmConfig {
  int n_sites = 6;
  double hop_scale = 1.0;     // T
  double interaction = 26.0;  // U
  std::optional<double> field;  // B; resonant S J when unset
  int n_max = 2;
  std::size_t dimension_cap = kDefaultDimensionCap;

  void validate() const;
  /// J = 16 T^2 / (U N)
  double j_scale() const;
  double field_value() const;
  /// tau = U N pi / (16 T^2) = pi / J
  double tau() const;
  /// alpha_n = 2 sqrt((n/N)(1 - n/N)), n = 1..N-1
  std::vector<double> alpha() const;
};

struct LocalState {
  int n_a = 0;
  int n_b = 0;
  int atoms() const { return n_a + n_b; }
};

/// Fixed-atom-number Fock basis. Local states are ordered lexicographically
/// in (n_a, n_b); global states lexicographically in the site tuple with
/// site 1 most significant, so the packed keys are sorted.
class BosonicBasis {
 public:
  BosonicBasis(int n_sites, int n_max, int n_total, std::size_t dimension_cap = kDefaultDimensionCap);
  static BosonicBasis unit_filling(const BhmConfig& config);

  std::size_t dim() const { return keys_.size(); }
  int n_sites() const { return n_sites_; }
  int n_max() const { return n_max_; }
  int n_total() const { return n_total_; }
  const std::vector<LocalState>& local_states() const { return local_; }
  int local_dim() const { return static_cast<int>(local_.size()); }

  std::uint64_t key(std::size_t index) const { return keys_[index]; }
  /// Local-state index at `site` (1-based) of basis state `index`.
  int local_index(std::size_t index, int site) const;
  std::optional<std::size_t> index_of(std::span<const int> local_indices) const;
  std::optional<std::size_t> index_of_key(std::uint64_t key) const;

  /// Local index of the singly-occupied state that encodes a qubit level:
  /// 0 -> one b-atom, 1 -> one a-atom.
  int qubit_level(int bit) const;

  /// Total a-atom count per basis state.
  std::vector<int> a_counts() const;

 private:
  int n_sites_;
  int n_max_;
  int n_total_;
  std::vector<LocalState> local_;
  std::vector<std::uint64_t> place_;  // L^(N - site)
  std::vector<std::uint64_t> keys_;
};

/// Closed-form count of fixed-N_tot states, for cross-checking enumeration.
std::uint64_t count_states(int n_sites, int n_max, int n_total);

/// Instantaneous Hamiltonian parameters.
struct BhmCouplings {
  std::vector<double> t_a;  // per bond, N-1
  std::vector<double> t_b;
  double u_a = 0.0;
  double u_b = 0.0;
  double u_ab = 0.0;
  double field = 0.0;
};

/// The engineered point of `config`.
BhmCouplings engineered_couplings(const BhmConfig& config);

/// Hamiltonian split into coupling-independent pieces so that the
/// instantaneous operator can be re-weighted without reassembly.
class BhmTerms {
 public:
  explicit BhmTerms(const BosonicBasis& basis);

  std::size_t dim() const { return hop_.rows; }
  std::vector<double> diagonal(const BhmCouplings& c) const;
  std::vector<double> hop_weights(const BhmCouplings& c) const;

  /// Matrix-free operator for the given couplings.
  LinearOperator op(const BhmCouplings& c) const;
  CsrMatrix assemble(const BhmCouplings& c) const;

  const CsrMatrix& hopping_pattern() const { return hop_; }
  std::span<const std::uint16_t> hopping_terms() const { return term_; }

 private:
  int n_sites_;
  CsrMatrix hop_;                    // -sqrt factors, unit hopping
  std::vector<std::uint16_t> term_;  // 2*(bond-1) + species
  std::vector<double> d_aa_, d_bb_, d_ab_, d_field_;
};

CsrMatrix build_bhm(const BosonicBasis& basis, const BhmCouplings& couplings);

/// Second-order spin couplings. lambda_z on sites 1..N-1 follows the bond
/// formula; site N carries the bare field B/2.
qsim::SpinChainParams spin_couplings_from_bhm(std::span<const double> t_a, std::span<const double> t_b,
                                              double u_a, double u_b, double u_ab, double field);

/// Qubit-register state mapped onto the singly-occupied sector.
CVector embed_qubit_state(const qsim::PureState& state, const BosonicBasis& basis);

/// Reduced density matrix on `keep_sites` with local dimension L per site;
/// qubit_levels set for fidelity embedding.
qsim::DensityMatrix reduced_density(std::span<const cplx> state, const BosonicBasis& basis,
                                    std::span<const int> keep_sites);

}  // namespace ebus::bhm
