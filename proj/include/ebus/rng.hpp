#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ebus {

/// splitmix64 finaliser; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Child seed from a base seed and an ordered list of keys.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

/// Bit pattern of a double, for value-keyed seed derivation.
std::uint64_t double_bits(double x);

/// Portable random source. mt19937_64 is fully specified by the standard;
/// the uniform and normal transforms are written out here because the
/// standard distributions are implementation-defined, and outputs must be
/// byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller (both variates used).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ebus
