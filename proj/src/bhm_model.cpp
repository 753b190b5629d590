#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "ebus/bhm.hpp"
#include "ebus/kernels.hpp"

namespace ebus::bhm {

BhmCouplings engineered_couplings(const BhmConfig& config) {
  config.validate();
  BhmCouplings c;
  for (double a : config.alpha()) {
    c.t_a.push_back(config.hop_scale * std::sqrt(a));
    c.t_b.push_back(config.hop_scale * std::sqrt(a));
  }
  c.u_a = config.interaction;
  c.u_b = config.interaction;
  c.u_ab = 0.5 * config.interaction;
  c.field = config.field_value();
  return c;
}

BhmTerms::BhmTerms(const BosonicBasis& basis) : n_sites_(basis.n_sites()) {
  const std::size_t dim = basis.dim();
  const int n = basis.n_sites();
  const auto& local = basis.local_states();
  if (2 * (n - 1) > 65535) throw CapacityError("BhmTerms: too many bonds");

  // Local index lookup by (n_a, n_b).
  const int nm = basis.n_max();
  std::vector<int> lookup(static_cast<std::size_t>((nm + 1) * (nm + 1)), -1);
  for (std::size_t l = 0; l < local.size(); ++l)
    lookup[static_cast<std::size_t>(local[l].n_a * (nm + 1) + local[l].n_b)] = static_cast<int>(l);
  auto local_of = [&](int na, int nb) {
    if (na < 0 || nb < 0 || na + nb > nm) return -1;
    return lookup[static_cast<std::size_t>(na * (nm + 1) + nb)];
  };

  d_aa_.assign(dim, 0.0);
  d_bb_.assign(dim, 0.0);
  d_ab_.assign(dim, 0.0);
  d_field_.assign(dim, 0.0);
  hop_.rows = hop_.cols = dim;
  hop_.row_ptr.assign(1, 0);
  hop_.row_ptr.reserve(dim + 1);

  std::vector<int> locals(static_cast<std::size_t>(n));
  std::vector<std::tuple<std::uint32_t, double, std::uint16_t>> row;
  for (std::size_t i = 0; i < dim; ++i) {
    for (int s = 1; s <= n; ++s) locals[static_cast<std::size_t>(s - 1)] = basis.local_index(i, s);
    for (int s = 0; s < n; ++s) {
      const auto& ls = local[static_cast<std::size_t>(locals[static_cast<std::size_t>(s)])];
      d_aa_[i] += 0.5 * ls.n_a * (ls.n_a - 1);
      d_bb_[i] += 0.5 * ls.n_b * (ls.n_b - 1);
      d_ab_[i] += static_cast<double>(ls.n_a) * ls.n_b;
      d_field_[i] += 0.5 * (ls.n_a - ls.n_b);
    }

    row.clear();
    for (int bond = 0; bond + 1 < n; ++bond) {
      const auto l = static_cast<std::size_t>(bond);
      const auto r = static_cast<std::size_t>(bond + 1);
      const LocalState left = local[static_cast<std::size_t>(locals[l])];
      const LocalState right = local[static_cast<std::size_t>(locals[r])];
      for (int species = 0; species < 2; ++species) {
        const int nl = species == 0 ? left.n_a : left.n_b;
        const int nr = species == 0 ? right.n_a : right.n_b;
        // from -> to: move one atom of `species` across the bond.
        for (int dir = 0; dir < 2; ++dir) {
          const int src = dir == 0 ? nr : nl;
          const int dst = dir == 0 ? nl : nr;
          if (src == 0) continue;
          const int d = dir == 0 ? 1 : -1;  // change of the left occupation
          const int new_l = species == 0 ? local_of(left.n_a + d, left.n_b) : local_of(left.n_a, left.n_b + d);
          const int new_r = species == 0 ? local_of(right.n_a - d, right.n_b) : local_of(right.n_a, right.n_b - d);
          if (new_l < 0 || new_r < 0) continue;
          auto target = locals;
          target[l] = new_l;
          target[r] = new_r;
          const auto j = basis.index_of(target);
          if (!j) continue;
          const double amp = -std::sqrt(static_cast<double>(src) * (dst + 1));
          row.emplace_back(static_cast<std::uint32_t>(*j), amp, static_cast<std::uint16_t>(2 * bond + species));
        }
      }
    }
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    for (const auto& [c, v, t] : row) {
      hop_.col.push_back(c);
      hop_.val.push_back(v);
      term_.push_back(t);
    }
    hop_.row_ptr.push_back(hop_.val.size());
  }
}

std::vector<double> BhmTerms::diagonal(const BhmCouplings& c) const {
  std::vector<double> d(dim());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = c.u_a * d_aa_[i] + c.u_b * d_bb_[i] + c.u_ab * d_ab_[i] + c.field * d_field_[i];
  return d;
}

std::vector<double> BhmTerms::hop_weights(const BhmCouplings& c) const {
  const auto bonds = static_cast<std::size_t>(n_sites_ - 1);
  if (c.t_a.size() != bonds || c.t_b.size() != bonds)
    throw InvalidArgument("BhmCouplings: expected " + std::to_string(bonds) + " hopping values per species");
  std::vector<double> w(2 * bonds);
  for (std::size_t b = 0; b < bonds; ++b) {
    w[2 * b] = c.t_a[b];
    w[2 * b + 1] = c.t_b[b];
  }
  return w;
}

LinearOperator BhmTerms::op(const BhmCouplings& c) const {
  auto diag = std::make_shared<std::vector<double>>(diagonal(c));
  auto weights = std::make_shared<std::vector<double>>(hop_weights(c));
  return {dim(), [this, diag, weights](std::span<const cplx> x, std::span<cplx> y) {
            kernels::weighted_matvec(hop_, term_, *weights, *diag, x, y);
          }};
}

CsrMatrix BhmTerms::assemble(const BhmCouplings& c) const {
  const auto diag = diagonal(c);
  const auto w = hop_weights(c);
  CsrBuilder b(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    // Entries must be appended per row; the diagonal goes in with the rest.
    for (std::size_t k = hop_.row_ptr[i]; k < hop_.row_ptr[i + 1]; ++k) {
      const double v = w[term_[k]] * hop_.val[k];
      if (v != 0.0) b.add(i, hop_.col[k], v);
    }
    if (diag[i] != 0.0) b.add(i, i, diag[i]);
  }
  return b.finish();
}

CsrMatrix build_bhm(const BosonicBasis& basis, const BhmCouplings& couplings) {
  for (double v : {couplings.u_a, couplings.u_b, couplings.u_ab, couplings.field})
    if (!std::isfinite(v)) throw InvalidArgument("build_bhm: couplings must be finite");
  return BhmTerms(basis).assemble(couplings);
}

qsim::SpinChainParams spin_couplings_from_bhm(std::span<const double> t_a, std::span<const double> t_b, double u_a,
                                              double u_b, double u_ab, double field) {
  if (!(u_a > 0.0) || !(u_b > 0.0) || !(u_ab > 0.0))
    throw InvalidArgument("spin_couplings_from_bhm: interaction energies must be positive");
  if (t_a.size() != t_b.size() || t_a.empty()) throw InvalidArgument("spin_couplings_from_bhm: bond arrays differ");
  const std::size_t bonds = t_a.size();
  qsim::SpinChainParams p;
  p.lambda_zz.resize(bonds);
  p.lambda_xy.resize(bonds);
  p.lambda_z.assign(bonds + 1, 0.5 * field);
  for (std::size_t n = 0; n < bonds; ++n) {
    const double a2 = t_a[n] * t_a[n];
    const double b2 = t_b[n] * t_b[n];
    p.lambda_zz[n] = (a2 + b2) / (2.0 * u_ab) - a2 / u_a - b2 / u_b;
    p.lambda_z[n] = 4.0 * (a2 / u_a - b2 / u_b) + 0.5 * field;
    p.lambda_xy[n] = t_a[n] * t_b[n] / u_ab;
  }
  return p;
}

CVector embed_qubit_state(const qsim::PureState& state, const BosonicBasis& basis) {
  const int n = basis.n_sites();
  if (state.n_qubits() != n) throw InvalidArgument("embed_qubit_state: qubit count differs from site count");
  if (basis.n_total() != n) throw InvalidArgument("embed_qubit_state: basis is not at unit filling");
  const int lv[2] = {basis.qubit_level(0), basis.qubit_level(1)};
  CVector out(basis.dim(), cplx{});
  std::vector<int> locals(static_cast<std::size_t>(n));
  for (std::uint64_t q = 0; q < state.dim(); ++q) {
    if (state[q] == cplx{}) continue;
    for (int s = 1; s <= n; ++s) locals[static_cast<std::size_t>(s - 1)] = lv[(q & qsim::site_mask(n, s)) ? 1 : 0];
    const auto idx = basis.index_of(locals);
    if (!idx) throw InvalidArgument("embed_qubit_state: singly-occupied state missing from basis");
    out[*idx] = state[q];
  }
  return out;
}

qsim::DensityMatrix reduced_density(std::span<const cplx> state, const BosonicBasis& basis,
                                    std::span<const int> keep_sites) {
  if (state.size() != basis.dim()) throw InvalidArgument("reduced_density: state dimension differs from basis");
  if (keep_sites.empty()) throw InvalidArgument("reduced_density: keep_sites is empty");
  const int ld = basis.local_dim();
  std::vector<bool> kept(static_cast<std::size_t>(basis.n_sites()) + 1, false);
  for (int s : keep_sites) {
    if (s < 1 || s > basis.n_sites()) throw InvalidArgument("reduced_density: site out of range");
    if (kept[static_cast<std::size_t>(s)]) throw InvalidArgument("reduced_density: repeated site");
    kept[static_cast<std::size_t>(s)] = true;
  }
  Eigen::Index dk = 1;
  for (std::size_t k = 0; k < keep_sites.size(); ++k) dk *= ld;

  // Group amplitudes by the configuration of the traced-out sites.
  std::map<std::uint64_t, std::vector<std::pair<Eigen::Index, cplx>>> groups;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    if (state[i] == cplx{}) continue;
    Eigen::Index a = 0;
    for (int s : keep_sites) a = a * ld + basis.local_index(i, s);
    std::uint64_t env = 0;
    for (int s = 1; s <= basis.n_sites(); ++s)
      if (!kept[static_cast<std::size_t>(s)]) env = env * static_cast<std::uint64_t>(ld) + static_cast<std::uint64_t>(basis.local_index(i, s));
    groups[env].emplace_back(a, state[i]);
  }
  qsim::DensityMatrix rho;
  rho.matrix = Eigen::MatrixXcd::Zero(dk, dk);
  for (const auto& [env, members] : groups)
    for (const auto& [a, va] : members)
      for (const auto& [b, vb] : members) rho.matrix(a, b) += va * std::conj(vb);
  rho.local_dims.assign(keep_sites.size(), ld);
  rho.qubit_levels.assign(keep_sites.size(), {basis.qubit_level(0), basis.qubit_level(1)});
  return rho;
}

}  // namespace ebus::bhm
