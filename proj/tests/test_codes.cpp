// Stabilizer-code unit tests: exact Pauli arithmetic, the three named codes,
// syndrome machinery, and Pauli-error classification.
#include "qer/codes.hpp"

#include <cmath>

#include "doctest.h"

using namespace qer;

TEST_CASE("pauli word products carry exact quarter phases") {
  // XY = iZ and YX = -iZ, phases tracked as integers.
  const PauliWord xy = pauli_mul({"X", 0}, {"Y", 0});
  CHECK(xy.word == "Z");
  CHECK(xy.phase4 == 1);
  const PauliWord yx = pauli_mul({"Y", 0}, {"X", 0});
  CHECK(yx.phase4 == 3);
  // Dense check on a two-qubit word: matrices multiply exactly.
  const PauliWord a{"XZ", 0}, b{"YY", 0};
  const Mat prod = pauli_word_dense(a) * pauli_word_dense(b);
  CHECK((prod - pauli_word_dense(pauli_mul(a, b))).norm() == 0.0);
}

TEST_CASE("pauli_apply matches the dense Kronecker matrix") {
  for (const char* w : {"X", "Y", "Z", "XY", "ZYX", "IYZI"}) {
    const PauliWord p{w, 1};
    const Mat dense = pauli_word_dense(p);
    const Mat direct = cplx(0, 1) * pauli_string_matrix(w);
    CHECK((dense - direct).norm() <= 1e-15);
    // Column-wise application reproduces the matrix-vector product.
    const Index d = dense.rows();
    Vec v(d);
    for (Index i = 0; i < d; ++i) v(i) = cplx(std::cos(1.0 + double(i)), std::sin(0.5 * double(i)));
    CHECK((pauli_apply(p, v) - dense * v).norm() <= 1e-12);
  }
}

TEST_CASE("anticommutation counts overlapping disagreeing letters") {
  CHECK(pauli_anticommutes("X", "Z"));
  CHECK(!pauli_anticommutes("X", "X"));
  CHECK(!pauli_anticommutes("XX", "ZZ"));
  CHECK(pauli_anticommutes("XZZXI", "ZIIII"));
  CHECK(pauli_weight("IXYZI") == 3);
}

TEST_CASE("five qubit code satisfies all stabilizer identities") {
  const StabilizerCode code = five_qubit_code();
  CHECK(code.n == 5);
  CHECK(code.k == 1);
  CHECK(code.generators.size() == 4);
  REQUIRE(code.U_C.rows() == 32);
  REQUIRE(code.U_C.cols() == 2);
  CHECK((code.U_C.adjoint() * code.U_C - Mat::Identity(2, 2)).norm() <= 1e-12);
  for (const auto& g : code.generators)
    CHECK((pauli_apply_cols({g, 0}, code.U_C) - code.U_C).norm() <= 1e-12);
  // Logical action: X on the code space swaps codewords, Z signs them.
  CHECK((pauli_apply_cols({"XXXXX", 0}, code.U_C) -
         code.U_C * pauli_matrix('X')).norm() <= 1e-12);
  CHECK((pauli_apply_cols({"ZZZZZ", 0}, code.U_C) -
         code.U_C * pauli_matrix('Z')).norm() <= 1e-12);
}

TEST_CASE("steane code satisfies all stabilizer identities") {
  const StabilizerCode code = steane_code();
  CHECK(code.n == 7);
  CHECK(code.generators.size() == 6);
  CHECK((code.U_C.adjoint() * code.U_C - Mat::Identity(2, 2)).norm() <= 1e-12);
  for (const auto& g : code.generators)
    CHECK((pauli_apply_cols({g, 0}, code.U_C) - code.U_C).norm() <= 1e-12);
}

TEST_CASE("shor code reproduces the explicit codewords") {
  const StabilizerCode code = shor_code();
  CHECK(code.n == 9);
  CHECK(code.generators.size() == 8);
  for (const auto& g : code.generators)
    CHECK((pauli_apply_cols({g, 0}, code.U_C) - code.U_C).norm() <= 1e-12);

  // Independent oracle: |0_L> and |1_L> as normalized triple products of
  // (|000> +- |111>).
  const Index d = 512;
  Vec plus = Vec::Zero(8), minus = Vec::Zero(8);
  plus(0) = plus(7) = 1.0 / std::sqrt(2.0);
  minus(0) = 1.0 / std::sqrt(2.0);
  minus(7) = -1.0 / std::sqrt(2.0);
  auto triple = [&](const Vec& b) {
    Vec out = b;
    for (int rep = 0; rep < 2; ++rep) {
      Vec next(out.size() * 8);
      for (Index i = 0; i < out.size(); ++i)
        for (Index j = 0; j < 8; ++j) next(i * 8 + j) = out(i) * b(j);
      out = next;
    }
    return out;
  };
  const Vec zeroL = triple(plus), oneL = triple(minus);
  REQUIRE(zeroL.size() == d);
  CHECK((code.U_C.col(0) - zeroL).norm() <= 1e-12);
  CHECK((code.U_C.col(1) - oneL).norm() <= 1e-12);
}

TEST_CASE("random codes are deterministic isometries that vary by seed") {
  const Mat A = random_code(6, 2, 42), B = random_code(6, 2, 42);
  REQUIRE(A.rows() == 64);
  REQUIRE(A.cols() == 4);
  CHECK((A.adjoint() * A - Mat::Identity(4, 4)).norm() <= 1e-12);
  CHECK((A - B).norm() == 0.0);
  CHECK((A - random_code(6, 2, 43)).norm() > 1e-3);
}

TEST_CASE("syndrome decomposition partitions and transfers correctly") {
  const StabilizerCode code = five_qubit_code();
  const SyndromeDecomposition sd = syndrome_decomposition(code);
  REQUIRE(sd.U_Cq.size() == 16);
  REQUIRE(sd.A.size() == 4);
  CHECK(sd.T[0].word == "IIIII");

  SUBCASE("projectors are orthogonal, rank 2, and resolve the identity") {
    Mat sum = Mat::Zero(32, 32);
    for (Index q = 0; q < 16; ++q) {
      const Mat P = sd.projector(q);
      CHECK(std::abs(P.trace().real() - 2.0) <= 1e-12);
      CHECK((P * P - P).norm() <= 1e-12);
      sum += P;
    }
    CHECK((sum - Mat::Identity(32, 32)).norm() <= 1e-12);
    CHECK((sd.projector(3) * sd.projector(9)).norm() <= 1e-12);
  }

  SUBCASE("code-space isometry is syndrome zero") {
    CHECK((sd.U_Cq[0] - code.U_C).norm() == 0.0);
  }

  SUBCASE("normalizers act on the source through the encoding") {
    for (Index p = 0; p < 4; ++p) {
      const Mat lhs = sd.A[std::size_t(p)] * code.U_C;
      const Mat rhs = code.U_C * normalizer_source_action(1, p);
      CHECK((lhs - rhs).norm() <= 1e-12);
    }
  }

  SUBCASE("subspace transfer commutes with every normalizer") {
    for (auto [qa, qb] : {std::pair<Index, Index>{0, 3}, {2, 5}, {7, 7}, {1, 14}}) {
      const Mat W = sd.transfer(qa, qb);
      for (const Mat& A : sd.A)
        CHECK((W * A - A * W).norm() <= 1e-11);
    }
  }

  SUBCASE("frame elements are orthogonal with squared norm 2") {
    for (Index p = 0; p < 4; ++p)
      for (Index q = 0; q < 16; q += 5)
        for (Index pp = 0; pp < 4; ++pp)
          for (Index qq = 0; qq < 16; qq += 3) {
            const cplx ip = hs_inner(sd.A[std::size_t(p)] * sd.U_Cq[std::size_t(q)],
                                     sd.A[std::size_t(pp)] * sd.U_Cq[std::size_t(qq)]);
            if (p == pp && q == qq)
              CHECK(std::abs(ip - 2.0) <= 1e-10);
            else
              CHECK(std::abs(ip) <= 1e-10);
          }
  }
}

TEST_CASE("transfer words are minimum weight with lexicographic ties") {
  const StabilizerCode code = five_qubit_code();
  const SyndromeDecomposition sd = syndrome_decomposition(code);
  // The five-qubit code corrects all single-qubit errors: every nonzero
  // syndrome is reached by exactly one weight-1 word, so each T_q must be a
  // weight-1 word possibly multiplied by logicals (weight 5 overlap).
  for (Index q = 1; q < 16; ++q) {
    int count = 0;
    for (int pos = 0; pos < 5; ++pos)
      for (char c : {'X', 'Y', 'Z'}) {
        std::string w = "IIIII";
        w[std::size_t(pos)] = c;
        int syn = 0;
        for (std::size_t b = 0; b < 4; ++b)
          syn |= int(pauli_anticommutes(w, code.generators[b])) << b;
        if (syn == q) ++count;
      }
    CHECK(count == 1);
  }
}

TEST_CASE("pauli error classification lands each term in one cell") {
  const StabilizerCode code = five_qubit_code();
  const SyndromeDecomposition sd = syndrome_decomposition(code);

  SUBCASE("identity channel sits at the origin cell") {
    PauliChannelSpec spec;
    spec.n = 5;
    spec.terms = {{"IIIII", 1.0}};
    const RMat tab = pauli_error_coefficients(code, sd, spec);
    CHECK(std::abs(tab(0, 0) - 1.0) <= 1e-14);
    CHECK(std::abs(tab.sum() - 1.0) <= 1e-14);
  }

  SUBCASE("a single-qubit flip occupies exactly one cell") {
    PauliChannelSpec spec;
    spec.n = 5;
    spec.terms = {{"IIXII", 1.0}};
    const RMat tab = pauli_error_coefficients(code, sd, spec);
    CHECK(std::abs(tab.sum() - 1.0) <= 1e-12);
    CHECK(std::abs(tab.maxCoeff() - 1.0) <= 1e-12);
    CHECK(tab(0, 0) <= 1e-14);  // detectable: lands outside the code space
  }

  SUBCASE("five-fold depolarizing noise classifies completely") {
    const KrausChannel dep = depolarizing(0.1);
    PauliChannelSpec spec;
    spec.n = 5;
    const char letters[4] = {'I', 'X', 'Y', 'Z'};
    const double amps[4] = {std::sqrt(0.9), std::sqrt(0.1 / 3),
                            std::sqrt(0.1 / 3), std::sqrt(0.1 / 3)};
    for (int idx = 0; idx < 1024; ++idx) {
      int rest = idx;
      std::string w;
      double a = 1.0;
      for (int j = 0; j < 5; ++j) {
        w.push_back(letters[rest % 4]);
        a *= amps[rest % 4];
        rest /= 4;
      }
      spec.terms.push_back({w, a});
    }
    (void)dep;
    const RMat tab = pauli_error_coefficients(code, sd, spec);
    CHECK(std::abs(tab.sum() - 1.0) <= 1e-12);
    // Weight-0 and weight-1 errors are uniquely classified, so the sixteen
    // cells they occupy each carry at least the corresponding probability.
    CHECK(tab(0, 0) >= 0.9 * 0.9 * 0.9 * 0.9 * 0.9 - 1e-12);
  }
}

TEST_CASE("alternate logical choices leave the code space unchanged") {
  const StabilizerCode base = five_qubit_code();
  // Multiply the logicals by stabilizer elements: still valid logicals.
  const PauliWord lx2 = pauli_mul({"XXXXX", 0}, {base.generators[0], 0});
  const PauliWord lz2 = pauli_mul({"ZZZZZ", 0}, {base.generators[1], 0});
  const StabilizerCode alt =
      make_stabilizer_code(base.generators, {lx2.word}, {lz2.word});
  const Mat P0 = base.U_C * base.U_C.adjoint();
  const Mat P0alt = alt.U_C * alt.U_C.adjoint();
  CHECK((P0 - P0alt).norm() <= 1e-12);
}
