#include <doctest.h>

#include <cmath>

#include "ebus/fermion_core.hpp"

using namespace ebus;
using namespace ebus::fermion;

TEST_SUITE("fermion") {

TEST_CASE("angular-momentum couplings") {
  const auto c = build_angular_momentum_chain(4, 2.0, 0.5);
  REQUIRE(c.couplings.size() == 3);
  CHECK(c.couplings[0] == doctest::Approx(std::sqrt(3.0)));
  CHECK(c.couplings[1] == doctest::Approx(2.0));
  CHECK(c.couplings[2] == doctest::Approx(std::sqrt(3.0)));
  CHECK(c.onsite == std::vector<double>(4, 0.5));
  CHECK(resonant_field(4, 2.0) == doctest::Approx(3.0));
  CHECK(inversion_time(c) == doctest::Approx(kPi / 2.0));
  CHECK(profile_deviation(c) < 1e-15);
}

TEST_CASE("invalid chains") {
  CHECK_THROWS_AS(build_angular_momentum_chain(1, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_angular_momentum_chain(4, 0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_angular_momentum_chain(4, -1.0, 0.0), InvalidArgument);
  auto c = build_resonant_chain(5, 1.0);
  c.couplings = {1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(inversion_time(c), UnsupportedProfile);
}

TEST_CASE("two-site propagator closed form") {
  // H = B - (J/2) sigma_x; at t = pi/J the off-diagonal is i exp(-i B pi / J).
  for (double b : {0.0, 0.3, 0.5, 2.0}) {
    const auto c = build_angular_momentum_chain(2, 1.0, b);
    const auto u = single_particle_propagator(c, kPi);
    const cplx want = cplx(0, 1) * std::polar(1.0, -b * kPi);
    CHECK(std::abs(u.at(2, 1) - want) < 1e-12);
    CHECK(std::abs(u.at(1, 1)) < 1e-12);
    CHECK(phase_distance(std::arg(want), single_particle_phase(c)) < 1e-12);
  }
}

TEST_CASE("resonant chains mirror with zero phase") {
  for (int n = 2; n <= 16; ++n) {
    CAPTURE(n);
    const auto c = build_resonant_chain(n, 1.3);
    const auto u = single_particle_propagator(c, inversion_time(c));
    CHECK(unitarity_defect(u) < 1e-12);
    for (const auto& e : mirror_report(u)) {
      CHECK(e.magnitude > 1.0 - 1e-9);
      CHECK(phase_distance(e.phase, 0.0) < 1e-9);
    }
  }
}

TEST_CASE("zero field leaves phase pi S") {
  const auto c = build_angular_momentum_chain(6, 1.0, 0.0);
  const auto rows = mirror_report(single_particle_propagator(c, inversion_time(c)));
  REQUIRE(rows.size() == 6);
  for (const auto& e : rows) {
    CHECK(e.magnitude > 1.0 - 1e-9);
    CHECK(phase_distance(e.phase, 2.5 * kPi) < 1e-9);
  }
}

TEST_CASE("phase distance wraps") {
  CHECK(phase_distance(kPi, -kPi) < 1e-15);
  CHECK(phase_distance(0.1, 2 * kPi + 0.1) < 1e-12);
  CHECK(phase_distance(0.0, kPi) == doctest::Approx(kPi));
}

TEST_CASE("occupation index puts site 1 first") {
  const auto s = OccupationState::from_index(0b1011, 4);
  CHECK(s.bits == std::vector<std::uint8_t>{1, 0, 1, 1});
  CHECK(s.particle_count() == 3);
  CHECK(s.index() == 0b1011);
}

TEST_CASE("fock images reverse sites with the sector sign") {
  const auto c = build_resonant_chain(5, 1.0);
  for (std::uint64_t k = 0; k < 32; ++k) {
    const auto in = OccupationState::from_index(k, 5);
    const auto img = fock_evolve(in, c);
    for (int i = 0; i < 5; ++i) CHECK(img.state.bits[i] == in.bits[4 - i]);
    const int q = in.particle_count();
    const double sign = (q * (q - 1) / 2) % 2 ? -1.0 : 1.0;
    CHECK(std::abs(img.phase - sign) < 1e-12);
  }
}

TEST_CASE("off-resonance fock phase carries Q phi_1") {
  const auto c = build_angular_momentum_chain(3, 1.0, 0.2);
  const double phi = single_particle_phase(c);
  const auto img = fock_evolve(OccupationState::from_index(0b110, 3), c);
  CHECK(img.state.index() == 0b011);
  CHECK(std::abs(img.phase - (-std::polar(1.0, 2 * phi))) < 1e-12);
}

}
