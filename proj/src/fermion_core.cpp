#include "ebus/fermion_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebus/krylov.hpp"

namespace ebus::fermion {

ChainSpec build_angular_momentum_chain(int n_sites, double j_scale, double field) {
  if (n_sites < 2) throw InvalidArgument("chain needs at least 2 sites");
  if (!(j_scale > 0.0)) throw InvalidArgument("j_scale must be positive");
  if (!std::isfinite(field)) throw InvalidArgument("field must be finite");
  ChainSpec c;
  c.n_sites = n_sites;
  c.j_scale = j_scale;
  c.field = field;
  c.couplings.resize(static_cast<std::size_t>(n_sites - 1));
  for (int n = 1; n < n_sites; ++n)
    c.couplings[static_cast<std::size_t>(n - 1)] = 0.5 * j_scale * std::sqrt(static_cast<double>(n) * (n_sites - n));
  c.onsite.assign(static_cast<std::size_t>(n_sites), field);
  return c;
}

double resonant_field(int n_sites, double j_scale) {
  if (n_sites < 2) throw InvalidArgument("chain needs at least 2 sites");
  return 0.5 * j_scale * (n_sites - 1);
}

ChainSpec build_resonant_chain(int n_sites, double j_scale) {
  return build_angular_momentum_chain(n_sites, j_scale, resonant_field(n_sites, j_scale));
}

double profile_deviation(const ChainSpec& chain) {
  const int n_sites = chain.n_sites;
  if (n_sites < 2 || chain.couplings.size() != static_cast<std::size_t>(n_sites - 1) || !(chain.j_scale > 0.0))
    return INFINITY;
  double worst = 0.0;
  for (int n = 1; n < n_sites; ++n) {
    const double expected = 0.5 * chain.j_scale * std::sqrt(static_cast<double>(n) * (n_sites - n));
    worst = std::max(worst, std::abs(chain.couplings[static_cast<std::size_t>(n - 1)] - expected) / expected);
  }
  return worst;
}

double inversion_time(const ChainSpec& chain) {
  if (profile_deviation(chain) > 1e-9)
    throw UnsupportedProfile("inversion time is only defined for the angular-momentum profile");
  return kPi / chain.j_scale;
}

std::vector<double> single_particle_hamiltonian(const ChainSpec& chain) {
  const auto n = static_cast<std::size_t>(chain.n_sites);
  if (chain.onsite.size() != n || chain.couplings.size() + 1 != n)
    throw InvalidArgument("chain arrays have inconsistent lengths");
  std::vector<double> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = chain.onsite[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[(i + 1) * n + i] = -chain.couplings[i];
    h[i * n + (i + 1)] = -chain.couplings[i];
  }
  return h;
}

SingleParticlePropagator single_particle_propagator(const ChainSpec& chain, double t) {
  const auto n = static_cast<std::size_t>(chain.n_sites);
  EigenPropagator prop(single_particle_hamiltonian(chain), n);
  return {chain.n_sites, t, prop.unitary(t)};
}

double unitarity_defect(const SingleParticlePropagator& prop) {
  const auto n = static_cast<std::size_t>(prop.n_sites);
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += std::conj(prop.matrix[a * n + k]) * prop.matrix[b * n + k];
      worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

std::vector<MirrorEntry> mirror_report(const SingleParticlePropagator& prop) {
  if (prop.matrix.size() != static_cast<std::size_t>(prop.n_sites) * static_cast<std::size_t>(prop.n_sites))
    throw InvalidArgument("mirror_report: propagator is not square");
  std::vector<MirrorEntry> out;
  out.reserve(static_cast<std::size_t>(prop.n_sites));
  for (int n = 1; n <= prop.n_sites; ++n) {
    const cplx amp = prop.at(prop.n_sites - n + 1, n);
    const double mag = std::abs(amp);
    out.push_back({n, mag, mag < 1e-12 ? 0.0 : std::arg(amp)});
  }
  return out;
}

double phase_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

int OccupationState::particle_count() const {
  return std::accumulate(bits.begin(), bits.end(), 0);
}

std::uint64_t OccupationState::index() const {
  std::uint64_t idx = 0;
  for (auto b : bits) idx = (idx << 1) | (b ? 1u : 0u);
  return idx;
}

OccupationState OccupationState::from_index(std::uint64_t index, int n_sites) {
  OccupationState s;
  s.bits.resize(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i)
    s.bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((index >> (n_sites - 1 - i)) & 1u);
  return s;
}

double single_particle_phase(const ChainSpec& chain) {
  return kPi * chain.spin() - chain.field * inversion_time(chain);
}

FockImage fock_evolve(const OccupationState& state, const ChainSpec& chain) {
  if (state.n_sites() != chain.n_sites) throw InvalidArgument("fock_evolve: size mismatch");
  const double phi1 = single_particle_phase(chain);
  const long q = state.particle_count();
  const long sigma = q * (q - 1) / 2;
  FockImage out;
  out.state.bits.assign(state.bits.rbegin(), state.bits.rend());
  // Reduce both angles mod 2pi before exponentiating so large Q stays exact.
  const double reorder = (sigma % 2 == 0) ? 0.0 : kPi;
  out.phase = std::polar(1.0, std::fmod(static_cast<double>(q) * phi1, 2.0 * kPi) - reorder);
  return out;
}

}  // namespace ebus::fermion
