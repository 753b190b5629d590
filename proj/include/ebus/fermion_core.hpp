#pragma once

// Free-fermion picture of the entangling bus. Sites are labelled 1..N
// throughout; the mirror of site n is N - n + 1.

#include <cstdint>
#include <vector>

#include "ebus/types.hpp"

namespace ebus::fermion {

/// Hopping chain H = -sum_n j_n (c+_n c_{n+1} + h.c.) + sum_n u_n c+_n c_n.
struct ChainSpec {
  int n_sites = 0;
  std::vector<double> couplings;  // j_1 .. j_{N-1}
  std::vector<double> onsite;     // u_1 .. u_N
  double j_scale = 0.0;           // J
  double field = 0.0;             // B

  /// Effective angular momentum S = (N-1)/2 of the single-particle sector.
  double spin() const { return 0.5 * (n_sites - 1); }
};

/// j_n = (J/2) sqrt(n (N-n)), u_n = B.
ChainSpec build_angular_momentum_chain(int n_sites, double j_scale, double field);

/// B = S J, the field that cancels the single-particle transfer phase.
double resonant_field(int n_sites, double j_scale);

/// Angular-momentum chain at the resonant field.
ChainSpec build_resonant_chain(int n_sites, double j_scale);

/// Relative deviation of the couplings from the angular-momentum form.
double profile_deviation(const ChainSpec& chain);

/// tau = pi / J. Throws UnsupportedProfile unless the couplings follow the
/// angular-momentum form to 1e-9 relative.
double inversion_time(const ChainSpec& chain);

/// Single-particle Hamiltonian (tridiagonal), column-major N x N.
std::vector<double> single_particle_hamiltonian(const ChainSpec& chain);

struct SingleParticlePropagator {
  int n_sites = 0;
  double time = 0.0;
  CVector matrix;  // column-major

  /// Amplitude <row|U|col>, both 1-based sites.
  cplx at(int row, int col) const {
    return matrix[static_cast<std::size_t>((col - 1) * n_sites + (row - 1))];
  }
};

/// exp(-i t H1) via Hermitian eigendecomposition.
SingleParticlePropagator single_particle_propagator(const ChainSpec& chain, double t);

/// max |U^dagger U - 1|
double unitarity_defect(const SingleParticlePropagator& prop);

struct MirrorEntry {
  int site = 0;
  double magnitude = 0.0;
  double phase = 0.0;  // in (-pi, pi]; 0 when magnitude < 1e-12
};

/// Per-site (|<nbar|U|n>|, arg <nbar|U|n>).
std::vector<MirrorEntry> mirror_report(const SingleParticlePropagator& prop);

/// Phase difference wrapped into [0, pi], for mod-2pi comparisons.
double phase_distance(double a, double b);

/// Fock state |q_1 .. q_N> = (c+_1)^q_1 .. (c+_N)^q_N |vac>.
struct OccupationState {
  std::vector<std::uint8_t> bits;  // bits[0] is site 1

  int n_sites() const { return static_cast<int>(bits.size()); }
  int particle_count() const;

  /// Qubit-register index with site 1 as the most significant bit.
  std::uint64_t index() const;
  static OccupationState from_index(std::uint64_t index, int n_sites);
};

struct FockImage {
  OccupationState state;
  cplx phase;
};

/// Image of a Fock state after one inversion time: the site-reversed
/// occupation with phase exp(i Q phi_1) exp(-i pi Q(Q-1)/2), where
/// phi_1 = pi S - B pi / J. At B = S J only the reordering sign remains.
FockImage fock_evolve(const OccupationState& state, const ChainSpec& chain);

/// Single-fermion transfer phase phi_1 = pi S - B pi / J.
double single_particle_phase(const ChainSpec& chain);

}  // namespace ebus::fermion
