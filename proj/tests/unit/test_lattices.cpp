#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "perfectst/lattices.hpp"

using namespace perfectst;

namespace {

const std::vector<double> kG9Row = {-2.831, 7.298, -1.435, 4.149, -8.688,
                                    -8.451, -6.414, 5.355, -7.983};
const std::vector<double> kG15Row = {-2.242, 6.361,  -10.78, -8.071,  7.253,
                                     -9.45,  1.127,  -3.334, 8.806,   -4.391,
                                     10.442, 5.404,  -11.12, -11.004, -9.989};

CMatrix circulant(const std::vector<double>& row) {
  const auto n = static_cast<Eigen::Index>(row.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[(i + j) % n];
  }
  return m;
}

const std::vector<double> kG5Row = {-0.3260, 0.5485, -0.4557, -0.5969, -0.1699};
const std::vector<double> kG7Row = {-0.681, 0.163, -0.449, 0.077, 0.082, 0.276, -0.469};

}  // namespace

TEST(OddLattice, DegreeOneIsIdentity) {
  const auto g = odd_lattice(1);
  ASSERT_EQ(g.dim(), 1);
  EXPECT_NEAR(std::abs(g.entries(0, 0) - cdouble(1.0)), 0.0, 1e-15);
}

TEST(OddLattice, RejectsEvenDimension) {
  EXPECT_THROW(odd_lattice(4), ArithmeticError);
}

TEST(OddLattice, NineDimensionalFirstRow) {
  const auto g = odd_lattice(9, 3);
  EXPECT_EQ(g.origin.p, 19u);
  EXPECT_EQ(g.origin.lambda, 10u);
  for (int j = 0; j < 9; ++j) {
    EXPECT_NEAR(g.entries(0, j).real(), kG9Row[j] / 19.0, 2e-3 / 19.0) << j;
    EXPECT_EQ(g.entries(0, j).imag(), 0.0);
  }
}

TEST(OddLattice, SmallestRootPermutesTheOrbit) {
  // r = 2 walks the same Galois orbit in a different order.
  auto a = odd_lattice(9).entries.row(0).real().eval();
  auto b = odd_lattice(9, 3).entries.row(0).real().eval();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OddLattice, FifteenDimensionalFirstRow) {
  const auto g = odd_lattice(15);
  EXPECT_EQ(g.origin.p, 31u);
  EXPECT_EQ(g.origin.r, 3u);
  EXPECT_EQ(g.origin.lambda, 16u);
  for (int j = 0; j < 15; ++j) EXPECT_NEAR(g.entries(0, j).real(), kG15Row[j] / 31.0, 2e-3) << j;
}

TEST(OddLattice, CirculantRealUnitary) {
  for (int n1 : {3, 5, 7, 9, 11, 13, 15}) {
    const auto g = odd_lattice(n1);
    EXPECT_LE(g.unitarity_defect, 1e-10) << n1;
    for (int i = 0; i + 1 < n1; ++i) {
      for (int j = 0; j < n1; ++j) {
        EXPECT_EQ(g.entries(i + 1, j), g.entries(i, (j + 1) % n1));
        EXPECT_EQ(g.entries(i, j).imag(), 0.0);
      }
    }
  }
}

TEST(OddLattice, RejectsNonPrimitiveGenerator) {
  // 4 has order 9 mod 19
  EXPECT_THROW(odd_lattice(9, 4), ArithmeticError);
}

TEST(OddLattice, PrimeCap) {
  SearchLimits limits;
  limits.lattice_prime_cap = 10;
  EXPECT_THROW(odd_lattice(9, std::nullopt, limits), SearchCapExceeded);
}

TEST(OddLatticeIngredients, Invariants) {
  for (int n1 : {3, 5, 7, 9, 15}) {
    const auto ing = odd_lattice_ingredients(n1);
    EXPECT_EQ((ing.lambda * (ing.r - 1)) % ing.p, 1u);
    EXPECT_EQ(mod_order(static_cast<std::int64_t>(ing.r), ing.p), ing.p - 1);
    EXPECT_EQ(ing.m, (ing.p - 1) / 2);
    EXPECT_EQ(ing.x_orbit.size(), static_cast<std::size_t>(n1));
    const double sign = ing.m % 2 == 0 ? 1.0 : -1.0;
    const cdouble sq = alpha_square_identity(ing);
    EXPECT_LT(std::abs(sq - cdouble(sign * static_cast<double>(ing.p))) / ing.p, 1e-9) << n1;
  }
}

TEST(TraceOrthogonality, PSquaredDelta) {
  for (int n1 : {3, 5, 7, 9, 15}) {
    const auto ing = odd_lattice_ingredients(n1);
    const double p2 = static_cast<double>(ing.p * ing.p);
    for (int t = 0; t < n1; ++t) {
      const cdouble expected = t == 0 ? p2 : 0.0;
      EXPECT_LT(std::abs(trace_orthogonality(ing, t) - expected), 1e-8 * p2) << n1 << " " << t;
    }
  }
  const auto nine = odd_lattice_ingredients(9);
  EXPECT_NEAR(trace_orthogonality(nine, 0).real(), 361.0, 1e-6);
  EXPECT_NEAR(std::abs(trace_orthogonality(nine, 3)), 0.0, 1e-6);
}

TEST(OddLattice, ClosedFormFirstRow) {
  for (int n1 : {3, 9}) {
    const auto ing = odd_lattice_ingredients(n1);
    const auto row = odd_first_row_closed_form(ing);
    const auto g = odd_lattice_from(ing);
    for (int j = 0; j < n1; ++j) EXPECT_LT(std::abs(row[j] - g.entries(0, j)), 1e-9) << n1;
  }
}

TEST(Pow2Lattice, Examples) {
  EXPECT_NEAR(std::abs(pow2_lattice(0).entries(0, 0) - cdouble(1.0)), 0.0, 1e-15);
  const cdouble w8 = std::polar(1.0, std::numbers::pi / 4.0);
  const double h = 1.0 / std::sqrt(2.0);
  const auto g = pow2_lattice(1).entries;
  EXPECT_LT(std::abs(g(0, 0) - h), 1e-15);
  EXPECT_LT(std::abs(g(0, 1) - h), 1e-15);
  EXPECT_LT(std::abs(g(1, 0) - h * w8), 1e-15);
  EXPECT_LT(std::abs(g(1, 1) - h * std::pow(w8, 5)), 1e-15);
  for (int s = 2; s <= 5; ++s) EXPECT_LE(pow2_lattice(s).unitarity_defect, 1e-12) << s;
}

TEST(HexC2, UnitaryWithUnitDeterminant) {
  const auto c = hex_c2().entries;
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_LT(std::abs(c(0, 1) - cdouble(0, h)), 1e-15);
  EXPECT_LT(std::abs(c(1, 1) - cdouble(0, -h)), 1e-15);
  EXPECT_LE(unitarity_defect(c), 1e-15);
  EXPECT_LT(std::abs(c.row(0).dot(c.row(1))), 1e-15);
  EXPECT_NEAR(std::abs(c.determinant()), 1.0, 1e-15);
}

TEST(Kronecker, Combinations) {
  const auto i2 = explicit_generator(CMatrix::Identity(2, 2), "I2");
  const auto i3 = explicit_generator(CMatrix::Identity(3, 3), "I3");
  const auto i6 = kronecker_combine(i2, i3);
  EXPECT_LT((i6.entries - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-15);

  const auto qam6 = kronecker_combine(odd_lattice(3), pow2_lattice(1));
  EXPECT_EQ(qam6.dim(), 6);
  EXPECT_LE(qam6.unitarity_defect, 1e-10);
  const auto hex6 = kronecker_combine(odd_lattice(3), hex_c2());
  EXPECT_LE(hex6.unitarity_defect, 1e-10);
  EXPECT_EQ(hex6.origin.kind, OriginKind::Kronecker);
  EXPECT_THROW(kronecker_combine(pow2_lattice(1), hex_c2()), std::invalid_argument);
}

TEST(GeneratorFor, UnitaryEverywhere) {
  for (int n = 1; n <= 16; ++n) EXPECT_LE(generator_for(n, FieldTag::QAM).unitarity_defect, 1e-10) << n;
  for (int n : {1, 2, 3, 5, 6, 7, 9, 10, 14}) {
    EXPECT_LE(generator_for(n, FieldTag::HEX).unitarity_defect, 1e-10) << n;
  }
  EXPECT_THROW(generator_for(4, FieldTag::HEX), std::invalid_argument);
  EXPECT_THROW(generator_for(8, FieldTag::HEX), std::invalid_argument);
  const auto one = generator_for(1, FieldTag::QAM);
  EXPECT_NEAR(std::abs(one.entries(0, 0) - cdouble(1.0)), 0.0, 1e-15);
}

TEST(GeneratorFor, WorkedExamplesAfterCyclicAlignment) {
  EXPECT_LT(cyclic_alignment_error(generator_for(5, FieldTag::QAM).entries, circulant(kG5Row)), 2e-3);
  EXPECT_LT(cyclic_alignment_error(generator_for(7, FieldTag::QAM).entries, circulant(kG7Row)), 2e-3);
}

TEST(GeneratorFor, RebuildFromOrigin) {
  for (int n : {2, 3, 6, 12, 15}) {
    const auto g = generator_for(n, FieldTag::QAM);
    EXPECT_EQ(generator_from_origin(g.origin).entries, g.entries) << n;
  }
  const auto h = generator_for(6, FieldTag::HEX);
  EXPECT_EQ(generator_from_origin(h.origin).entries, h.entries);
  EXPECT_EQ(origin_kind_from_string(to_string(OriginKind::HexC2)), OriginKind::HexC2);
}

TEST(CyclicAlignment, FindsShift) {
  const auto a = circulant({1, 2, 3, 4, 5});
  CMatrix b(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) b(i, j) = a(i, (j + 2) % 5);
  }
  int shift = -1;
  EXPECT_EQ(cyclic_alignment_error(a, b, &shift), 0.0);
  EXPECT_EQ(shift, 2);
}

TEST(AlternateGenerator, TwoByTwoBasis) {
  const auto g = alternate_2x2_generator();
  const cdouble w8 = std::polar(1.0, std::numbers::pi / 4.0);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_LT(std::abs(g.entries(1, 0) - h * std::pow(w8, 3)), 1e-15);
  EXPECT_LT(std::abs(g.entries(1, 1) - h * std::pow(w8, 7)), 1e-15);
  EXPECT_LE(g.unitarity_defect, 1e-15);
}
