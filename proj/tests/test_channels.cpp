// Channel-construction unit tests: trace preservation across parameter
// grids, pinned Kraus forms, tensor powers, encoding composition.
#include "qer/channels.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace qer;

namespace {

Mat rand_density(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Mat G(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) G(i, j) = cplx(nd(rng), nd(rng));
  Mat rho = G * G.adjoint();
  rho /= rho.trace();
  return rho;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("amplitude damping has the pinned Kraus pair") {
  SUBCASE("gamma = 0 is the identity channel") {
    const KrausChannel ch = amplitude_damping(0.0);
    REQUIRE(ch.elements.size() == 2);
    CHECK((ch.elements[0] - Mat::Identity(2, 2)).norm() == 0.0);
    CHECK(ch.elements[1].norm() == 0.0);
  }
  SUBCASE("gamma = 1 decays |1> fully") {
    const KrausChannel ch = amplitude_damping(1.0);
    Mat D(2, 2), F(2, 2);
    D << 1, 0, 0, 0;
    F << 0, 1, 0, 0;
    CHECK((ch.elements[0] - D).norm() == 0.0);
    CHECK((ch.elements[1] - F).norm() == 0.0);
  }
  SUBCASE("trace preservation at gamma = 0.09") {
    CHECK(cptp_defect(amplitude_damping(0.09)) <= 1e-14);
  }
  CHECK_THROWS(amplitude_damping(-0.1));
  CHECK_THROWS(amplitude_damping(1.1));
}

TEST_CASE("pure state rotation maps its two target states to pure outputs") {
  const double theta = 5 * kPi / 12;
  auto angle_ket = [](double a) {
    Vec v(2);
    v << std::cos(a), std::sin(a);
    return v;
  };
  for (double frac : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    const double phi = frac * theta;
    const KrausChannel ch = pure_state_rotation(theta, phi);
    REQUIRE(ch.elements.size() == 3);
    CHECK(cptp_defect(ch) <= 1e-12);
    for (double sign : {1.0, -1.0}) {
      const Vec in = angle_ket(sign * theta / 2);
      const Vec want = angle_ket(sign * (theta - phi) / 2);
      const Mat out = apply_channel(ch, Mat(in * in.adjoint()));
      // Output must be exactly the target pure state.
      const double overlap = (want.adjoint() * out * want)(0).real();
      CHECK(std::abs(out.trace().real() - 1.0) <= 1e-12);
      CHECK(overlap >= 1.0 - 1e-10);
    }
  }
}

TEST_CASE("pure state rotation with no rotation acts as the identity") {
  const KrausChannel ch = pure_state_rotation(5 * kPi / 12, 0.0);
  const Mat rho = rand_density(2, 7);
  CHECK((apply_channel(ch, rho) - rho).norm() <= 1e-12);
}

TEST_CASE("pure state rotation stays trace preserving across the grid") {
  for (double theta : {kPi / 6, kPi / 3, 5 * kPi / 12, 0.49 * kPi}) {
    for (int i = 0; i <= 20; ++i) {
      const double phi = theta * i / 20.0;
      CHECK(cptp_defect(pure_state_rotation(theta, phi)) <= 1e-12);
    }
  }
  CHECK_THROWS(pure_state_rotation(0.0, 0.0));
  CHECK_THROWS(pure_state_rotation(kPi / 3, kPi / 2));
  // Beyond theta = pi/2 the normalization system loses positivity for
  // mid-range phi; that is reported rather than silently clipped.
  CHECK_THROWS(pure_state_rotation(0.8 * kPi, 0.5 * 0.8 * kPi));
}

TEST_CASE("depolarizing channel and explicit Pauli channels") {
  SUBCASE("p = 0 is the identity channel") {
    const KrausChannel ch = depolarizing(0.0);
    CHECK((ch.elements[0] - Mat::Identity(2, 2)).norm() == 0.0);
    for (int k = 1; k < 4; ++k) CHECK(ch.elements[k].norm() == 0.0);
  }
  SUBCASE("trace preservation is exact-to-rounding for all p") {
    for (double p : {0.01, 0.05, 0.1, 0.2, 0.75, 1.0})
      CHECK(cptp_defect(depolarizing(p)) <= 1e-15);
  }
  SUBCASE("bit-flip channel matches explicit matrices") {
    const double p = 0.3;
    PauliChannelSpec spec;
    spec.n = 1;
    spec.terms = {{"I", std::sqrt(1 - p)}, {"X", std::sqrt(p)}};
    const KrausChannel ch = pauli_channel(spec);
    Mat X(2, 2);
    X << 0, 1, 1, 0;
    CHECK((ch.elements[0] - Mat(std::sqrt(1 - p) * Mat::Identity(2, 2))).norm() <= 1e-15);
    CHECK((ch.elements[1] - Mat(std::sqrt(p) * X)).norm() <= 1e-15);
  }
  SUBCASE("unnormalized or malformed specs are rejected") {
    PauliChannelSpec bad;
    bad.n = 1;
    bad.terms = {{"I", 0.5}};
    CHECK_THROWS(pauli_channel(bad));
    PauliChannelSpec dup;
    dup.n = 1;
    dup.terms = {{"I", std::sqrt(0.5)}, {"I", std::sqrt(0.5)}};
    CHECK_THROWS(pauli_channel(dup));
  }
}

TEST_CASE("tensor_pow layout, closure, and factor-wise action") {
  const KrausChannel ad = amplitude_damping(0.17);
  SUBCASE("n = 1 is unchanged") {
    const KrausChannel same = tensor_pow(ad, 1);
    REQUIRE(same.elements.size() == 2);
    CHECK((same.elements[0] - ad.elements[0]).norm() == 0.0);
  }
  SUBCASE("two-fold power: four elements in lexicographic order") {
    const KrausChannel sq = tensor_pow(ad, 2);
    REQUIRE(sq.elements.size() == 4);
    CHECK(sq.dim_in == 4);
    CHECK(cptp_defect(sq) <= 1e-12);
    // Element (0,1) equals the dense Kronecker product E0 (x) E1.
    CHECK((sq.elements[1] - kron(ad.elements[0], ad.elements[1])).norm() == 0.0);
    CHECK((sq.elements[2] - kron(ad.elements[1], ad.elements[0])).norm() == 0.0);
  }
  SUBCASE("acts factor-wise on product states") {
    const KrausChannel sq = tensor_pow(ad, 2);
    const Mat r1 = rand_density(2, 11), r2 = rand_density(2, 12);
    const Mat joint = apply_channel(sq, kron(r1, r2));
    const Mat split = kron(apply_channel(ad, r1), apply_channel(ad, r2));
    CHECK((joint - split).norm() <= 1e-12);
  }
  SUBCASE("element cap rejects blowups") {
    CHECK_THROWS(tensor_pow(ad, 5, 31));
    CHECK(tensor_pow(ad, 5, 32).elements.size() == 32);
  }
}

TEST_CASE("compose_encoding restricts the channel to the code space") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd;
  Mat G(8, 2);
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 2; ++j) G(i, j) = cplx(nd(rng), nd(rng));
  const Mat U = orthonormal_basis(G);
  REQUIRE(U.cols() == 2);

  SUBCASE("identity channel composes to the isometry itself") {
    KrausChannel id;
    id.dim_in = id.dim_out = 8;
    id.elements = {Mat::Identity(8, 8)};
    const KrausChannel enc = compose_encoding(id, U);
    REQUIRE(enc.elements.size() == 1);
    CHECK((enc.elements[0] - U).norm() == 0.0);
    CHECK(enc.dim_in == 2);
  }
  SUBCASE("closure survives composition") {
    const KrausChannel ch = tensor_pow(amplitude_damping(0.2), 3);
    const KrausChannel enc = compose_encoding(ch, U);
    CHECK(cptp_defect(enc) <= 1e-12);
  }
  SUBCASE("non-isometries are rejected") {
    CHECK_THROWS(compose_encoding(tensor_pow(amplitude_damping(0.2), 3), G));
  }
}
