#include "ebus/bhm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ebus::bhm {

void BhmConfig::validate() const {
  if (n_sites < 2) throw InvalidArgument("BhmConfig: need at least 2 sites");
  if (!(hop_scale > 0.0) || !std::isfinite(hop_scale)) throw InvalidArgument("BhmConfig: hop scale T must be positive");
  if (!(interaction > 0.0) || !std::isfinite(interaction)) throw InvalidArgument("BhmConfig: interaction U must be positive");
  if (field && !std::isfinite(*field)) throw InvalidArgument("BhmConfig: field must be finite");
  if (n_max < 1) throw InvalidArgument("BhmConfig: n_max must be at least 1");
}

double BhmConfig::j_scale() const { return 16.0 * hop_scale * hop_scale / (interaction * n_sites); }

double BhmConfig::field_value() const { return field.value_or(0.5 * (n_sites - 1) * j_scale()); }

double BhmConfig::tau() const { return interaction * n_sites * kPi / (16.0 * hop_scale * hop_scale); }

std::vector<double> BhmConfig::alpha() const {
  std::vector<double> a(static_cast<std::size_t>(n_sites - 1));
  for (int n = 1; n < n_sites; ++n) {
    const double x = static_cast<double>(n) / n_sites;
    a[static_cast<std::size_t>(n - 1)] = 2.0 * std::sqrt(x * (1.0 - x));
  }
  return a;
}

std::uint64_t count_states(int n_sites, int n_max, int n_total) {
  // ways[k]: number of local states holding exactly k atoms = k + 1.
  std::vector<std::uint64_t> dp(static_cast<std::size_t>(n_total) + 1, 0);
  dp[0] = 1;
  for (int s = 0; s < n_sites; ++s) {
    std::vector<std::uint64_t> next(dp.size(), 0);
    for (int have = 0; have <= n_total; ++have) {
      if (!dp[static_cast<std::size_t>(have)]) continue;
      for (int k = 0; k <= n_max && have + k <= n_total; ++k)
        next[static_cast<std::size_t>(have + k)] += dp[static_cast<std::size_t>(have)] * static_cast<std::uint64_t>(k + 1);
    }
    dp = std::move(next);
  }
  return dp[static_cast<std::size_t>(n_total)];
}

BosonicBasis::BosonicBasis(int n_sites, int n_max, int n_total, std::size_t dimension_cap)
    : n_sites_(n_sites), n_max_(n_max), n_total_(n_total) {
  if (n_sites < 1) throw InvalidArgument("BosonicBasis: need at least one site");
  if (n_max < 1) throw InvalidArgument("BosonicBasis: n_max must be at least 1");
  if (n_total < 0) throw InvalidArgument("BosonicBasis: negative atom number");

  for (int na = 0; na <= n_max; ++na)
    for (int nb = 0; na + nb <= n_max; ++nb) local_.push_back({na, nb});

  const auto ld = static_cast<std::uint64_t>(local_.size());
  place_.assign(static_cast<std::size_t>(n_sites), 1);
  for (int s = n_sites - 2; s >= 0; --s) {
    if (place_[static_cast<std::size_t>(s + 1)] > std::numeric_limits<std::uint64_t>::max() / ld)
      throw CapacityError("BosonicBasis: key space exceeds 64 bits");
    place_[static_cast<std::size_t>(s)] = place_[static_cast<std::size_t>(s + 1)] * ld;
  }
  if (place_[0] > std::numeric_limits<std::uint64_t>::max() / ld) throw CapacityError("BosonicBasis: key space exceeds 64 bits");

  const std::uint64_t expected = count_states(n_sites, n_max, n_total);
  if (expected > dimension_cap)
    throw CapacityError("Bose-Hubbard basis dimension " + std::to_string(expected) + " exceeds cap " +
                        std::to_string(dimension_cap));
  keys_.reserve(expected);

  // Depth-first in lexicographic order, so keys come out sorted.
  std::vector<int> locals(static_cast<std::size_t>(n_sites), 0);
  auto recurse = [&](auto&& self, int site, int remaining, std::uint64_t key) -> void {
    if (site == n_sites) {
      if (remaining == 0) keys_.push_back(key);
      return;
    }
    const int sites_left = n_sites - site - 1;
    for (std::size_t l = 0; l < local_.size(); ++l) {
      const int k = local_[l].atoms();
      if (k > remaining || remaining - k > sites_left * n_max) continue;
      self(self, site + 1, remaining - k, key + static_cast<std::uint64_t>(l) * place_[static_cast<std::size_t>(site)]);
    }
  };
  recurse(recurse, 0, n_total, 0);
}

BosonicBasis BosonicBasis::unit_filling(const BhmConfig& config) {
  config.validate();
  return BosonicBasis(config.n_sites, config.n_max, config.n_sites, config.dimension_cap);
}

int BosonicBasis::local_index(std::size_t index, int site) const {
  const auto ld = static_cast<std::uint64_t>(local_.size());
  return static_cast<int>((keys_[index] / place_[static_cast<std::size_t>(site - 1)]) % ld);
}

std::optional<std::size_t> BosonicBasis::index_of_key(std::uint64_t key) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - keys_.begin());
}

std::optional<std::size_t> BosonicBasis::index_of(std::span<const int> local_indices) const {
  if (local_indices.size() != static_cast<std::size_t>(n_sites_)) return std::nullopt;
  std::uint64_t key = 0;
  for (int s = 0; s < n_sites_; ++s) {
    const int l = local_indices[static_cast<std::size_t>(s)];
    if (l < 0 || l >= local_dim()) return std::nullopt;
    key += static_cast<std::uint64_t>(l) * place_[static_cast<std::size_t>(s)];
  }
  return index_of_key(key);
}

int BosonicBasis::qubit_level(int bit) const {
  const LocalState want = bit ? LocalState{1, 0} : LocalState{0, 1};
  for (std::size_t l = 0; l < local_.size(); ++l)
    if (local_[l].n_a == want.n_a && local_[l].n_b == want.n_b) return static_cast<int>(l);
  throw InvalidArgument("qubit_level: bit must be 0 or 1");
}

std::vector<int> BosonicBasis::a_counts() const {
  std::vector<int> out(dim(), 0);
  for (std::size_t i = 0; i < dim(); ++i)
    for (int s = 1; s <= n_sites_; ++s) out[i] += local_[static_cast<std::size_t>(local_index(i, s))].n_a;
  return out;
}

}  // namespace ebus::bhm
