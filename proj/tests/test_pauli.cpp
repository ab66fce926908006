// Copyright 2026 The cbqfim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <gtest/gtest.h>

#include "cbqfim/errors.hpp"
#include "cbqfim/pauli.hpp"
#include "support.hpp"

namespace cbqfim {
namespace {

using testing::kron_matrix;
using testing::random_pauli;

PauliString P(const char* s) { return parse_pauli(s); }

TEST(Commutes, SingleQubitXZAnticommute) { EXPECT_EQ(commutes(P("X"), P("Z")), Relation::Anticommute); }

TEST(Commutes, EvenOverlapCommutes) { EXPECT_EQ(commutes(P("ZZ"), P("XX")), Relation::Commute); }

TEST(Commutes, OddOverlapAnticommutes) { EXPECT_EQ(commutes(P("ZI"), P("XX")), Relation::Anticommute); }

TEST(Commutes, PhaseDoesNotMatter) { EXPECT_EQ(commutes(P("-iX"), P("Z")), Relation::Anticommute); }

TEST(Commutes, SizeMismatchThrows) { EXPECT_THROW(commutes(P("X"), P("XX")), DimensionError); }

TEST(Multiply, XTimesZIsMinusIY) {
  const PauliString r = P("X") * P("Z");
  EXPECT_EQ(r.x_mask(), 1u);
  EXPECT_EQ(r.z_mask(), 1u);
  EXPECT_EQ(r.phase_exp(), 3);
}

TEST(Multiply, ZTimesXIsPlusIY) {
  const PauliString r = P("Z") * P("X");
  EXPECT_EQ(r, P("+iY"));
  EXPECT_EQ(r.phase_exp(), 1);
}

TEST(Multiply, InvolutionGivesIdentity) {
  for (const char* s : {"X", "YZ", "XYZI"}) {
    const PauliString r = P(s) * P(s);
    EXPECT_TRUE(r.is_identity_up_to_phase());
    EXPECT_EQ(r.phase_exp(), 0) << s;
  }
}

TEST(Multiply, SizeMismatchThrows) { EXPECT_THROW(multiply(P("X"), P("XX")), DimensionError); }

TEST(Parse, LeftmostCharacterIsQubitZero) {
  const PauliString p = P("XIZ");
  EXPECT_EQ(p.x_mask(), 0b001u);
  EXPECT_EQ(p.z_mask(), 0b100u);
  EXPECT_EQ(p.phase_exp(), 0);
}

TEST(Parse, MinusIY) {
  const PauliString p = P("-iY");
  EXPECT_EQ(p.x_mask(), 1u);
  EXPECT_EQ(p.z_mask(), 1u);
  EXPECT_EQ(p.phase_exp(), 3);
}

TEST(Parse, IllegalCharacterReportsIndex) {
  try {
    P("XQ");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 1u);
  }
}

TEST(Parse, IndexCountsPhasePrefix) {
  try {
    P("-iXa");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 3u);
  }
}

TEST(Parse, RejectsEmptyLabels) {
  EXPECT_THROW(P(""), ParseError);
  EXPECT_THROW(P("-i"), ParseError);
}

TEST(Format, CanonicalRoundTrip) {
  EXPECT_EQ(format(P("+XZ")), "XZ");
  EXPECT_EQ(format(P("-YI")), "-YI");
  EXPECT_EQ(format(P("iZ")), "+iZ");
  EXPECT_EQ(format(P("-iXX")), "-iXX");
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const PauliString p = random_pauli(rng, 1 + static_cast<int>(rng() % 6));
    EXPECT_EQ(parse_pauli(format(p)), p);
  }
}

TEST(IsHermitian, Examples) {
  EXPECT_TRUE(is_hermitian(P("X")));
  EXPECT_FALSE(is_hermitian(P("iY")));
  const PauliString prod = P("ZI") * P("XX");
  EXPECT_FALSE(is_hermitian(prod));
  EXPECT_TRUE(is_hermitian(prod.times_i_pow(1)));
}

TEST(IsHermitian, MatchesConjugateTranspose) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const PauliString p = random_pauli(rng, 1 + static_cast<int>(rng() % 4));
    const Eigen::MatrixXcd m = kron_matrix(p);
    EXPECT_EQ(is_hermitian(p), m.isApprox(m.adjoint())) << format(p);
    EXPECT_EQ(!is_hermitian(p), m.isApprox(-m.adjoint())) << format(p);
  }
}

TEST(Tensor, LeftOperandOnLeadingQubits) {
  EXPECT_EQ(tensor(P("Y"), P("-XZ")), P("-YXZ"));
  EXPECT_EQ(tensor(P("iZ"), P("iX")), P("-ZX"));
}

TEST(DenseMatrix, AgreesWithKroneckerConstruction) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const PauliString p = random_pauli(rng, 1 + static_cast<int>(rng() % 4));
    EXPECT_EQ((dense_matrix(p) - kron_matrix(p)).cwiseAbs().maxCoeff(), 0.0) << format(p);
  }
}

TEST(PauliProperties, CommutationIsSymmetric) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const PauliString a = random_pauli(rng, n);
    const PauliString b = random_pauli(rng, n);
    EXPECT_EQ(commutes(a, b), commutes(b, a));
  }
}

TEST(PauliProperties, ReversedProductDiffersBySign) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const PauliString a = random_pauli(rng, n);
    const PauliString b = random_pauli(rng, n);
    const PauliString ab = a * b;
    const PauliString ba = b * a;
    EXPECT_EQ(ab.phase_free(), ba.phase_free());
    const int diff = (ab.phase_exp() - ba.phase_exp() + 4) % 4;
    EXPECT_EQ(diff, commutes(a, b) == Relation::Commute ? 0 : 2);
  }
}

TEST(PauliProperties, ProductMatchesDenseProduct) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const PauliString a = random_pauli(rng, n);
    const PauliString b = random_pauli(rng, n);
    // Entries are 0, +-1, +-i: the comparison is exact.
    EXPECT_EQ((kron_matrix(a * b) - kron_matrix(a) * kron_matrix(b)).cwiseAbs().maxCoeff(), 0.0)
        << format(a) << " * " << format(b);
  }
}

TEST(PauliProperties, HermitianProductsFollowRelation) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const PauliString a = random_pauli(rng, n, false);
    const PauliString b = random_pauli(rng, n, false);
    const PauliString ab = a * b;
    if (commutes(a, b) == Relation::Commute) {
      EXPECT_TRUE(is_hermitian(ab));
    } else {
      EXPECT_FALSE(is_hermitian(ab));
      EXPECT_TRUE(is_hermitian(ab.times_i_pow(1)));
    }
  }
}

TEST(PauliProperties, MasksStayWithinQubitCount) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const PauliString p = random_pauli(rng, n) * random_pauli(rng, n);
    EXPECT_EQ(p.x_mask() >> n, 0u);
    EXPECT_EQ(p.z_mask() >> n, 0u);
    EXPECT_GE(p.phase_exp(), 0);
    EXPECT_LE(p.phase_exp(), 3);
  }
}

}  // namespace
}  // namespace cbqfim
