#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "perfectst/algint.hpp"

using namespace perfectst;

namespace {

const Ring Zi = Ring::GaussianZi;
const Ring Zw = Ring::EisensteinZw3;

bool brute_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) return false;
  }
  return true;
}

}  // namespace

TEST(GaussLikeInt, NormsAndConjugates) {
  EXPECT_EQ((GaussLikeInt{3, 2, Zi}).norm(), 13);
  EXPECT_EQ((GaussLikeInt{3, 1, Zw}).norm(), 7);
  EXPECT_EQ((GaussLikeInt{3, 7, Zw}).norm(), 37);
  for (std::int64_t a = -6; a <= 6; ++a) {
    for (std::int64_t b = -6; b <= 6; ++b) {
      for (Ring ring : {Zi, Zw}) {
        const GaussLikeInt x{a, b, ring};
        EXPECT_EQ(x.conj().conj(), x);
        const auto prod = x * x.conj();
        EXPECT_EQ(prod.a, x.norm());
        EXPECT_EQ(prod.b, 0);
        EXPECT_NEAR(std::abs(x.value()) * std::abs(x.value()), static_cast<double>(x.norm()), 1e-9);
      }
    }
  }
}

TEST(GaussLikeInt, EisensteinConjugateIsOmegaSquared) {
  // 3 + w3^2 = 3 + (-1 - w3) = 2 - w3
  EXPECT_EQ((GaussLikeInt{3, 1, Zw}).conj(), (GaussLikeInt{2, -1, Zw}));
}

TEST(GaussLikeInt, Associates) {
  EXPECT_EQ(units(Zi).size(), 4u);
  EXPECT_EQ(units(Zw).size(), 6u);
  // i (2 - i) = 1 + 2i
  EXPECT_TRUE(is_associate({1, 2, Zi}, {2, -1, Zi}));
  EXPECT_FALSE(is_associate({1, 2, Zi}, {2, 1, Zi}));
  // w3 (-8 - 9 w3) = 9 + w3
  EXPECT_TRUE(is_associate({9, 1, Zw}, (GaussLikeInt{1, 9, Zw}).conj()));
}

TEST(IsPrime, SpecExamples) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(19));
  EXPECT_FALSE(is_prime(91));
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
}

TEST(IsPrime, MatchesTrialDivisionAndLargeCases) {
  for (std::uint64_t m = 0; m < 5000; ++m) EXPECT_EQ(is_prime(m), brute_prime(m)) << m;
  EXPECT_TRUE(is_prime(2305843009213693951ULL));   // 2^61 - 1
  EXPECT_FALSE(is_prime(3215031751ULL));           // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_FALSE(is_prime(18446744073709551615ULL));
  EXPECT_TRUE(is_prime(18446744073709551557ULL));  // largest 64-bit prime
}

TEST(ModOrder, Examples) {
  EXPECT_EQ(mod_order(5, 16), 4u);
  EXPECT_EQ(mod_order(1, 7), 1u);
  EXPECT_EQ(mod_order(13, 61), 3u);
  EXPECT_EQ(mod_order(-1, 7), 2u);
  EXPECT_THROW(mod_order(6, 9), ArithmeticError);
  try {
    mod_order(4, 8);
  } catch (const ArithmeticError& e) {
    EXPECT_NE(std::string(e.what()).find("not a unit"), std::string::npos);
  }
}

TEST(ModOrder, MatchesBrutePowering) {
  for (std::uint64_t m = 2; m < 120; ++m) {
    for (std::int64_t a = 1; a < static_cast<std::int64_t>(m); ++a) {
      if (std::gcd(static_cast<std::uint64_t>(a), m) != 1) continue;
      std::uint64_t t = 1, v = static_cast<std::uint64_t>(a) % m;
      while (v != 1 % m) {
        v = v * static_cast<std::uint64_t>(a) % m;
        ++t;
      }
      EXPECT_EQ(mod_order(a, m), t) << a << " mod " << m;
    }
  }
}

TEST(PrimitiveRoot, SmallestGenerator) {
  // 2 already generates (Z/19)^*, so the smallest root is 2, not 3.
  EXPECT_EQ(primitive_root(19), 2u);
  EXPECT_EQ(mod_order(2, 19), 18u);
  EXPECT_EQ(primitive_root(31), 3u);
  EXPECT_EQ(primitive_root(3), 2u);
  EXPECT_EQ(primitive_root(7), 3u);
  EXPECT_EQ(primitive_root(29), 2u);
  EXPECT_THROW(primitive_root(9), ArithmeticError);
  EXPECT_THROW(primitive_root(2), ArithmeticError);
}

TEST(Crt, Examples) {
  const std::vector<Congruence> a{{5, 16}, {2, 19}};
  EXPECT_EQ(crt(a), 21u);
  const std::vector<Congruence> b{{0, 11}};
  EXPECT_EQ(crt(b), 0u);
  const std::vector<Congruence> c{{1, 3}, {3, 4}};
  EXPECT_EQ(crt(c), 7u);
  const std::vector<Congruence> bad{{1, 4}, {3, 6}};
  EXPECT_THROW(crt(bad), ArithmeticError);
}

TEST(Crt, SubstitutesBack) {
  for (std::int64_t r1 = -3; r1 < 8; ++r1) {
    for (std::int64_t r2 = 0; r2 < 9; ++r2) {
      const std::vector<Congruence> sys{{r1, 8}, {r2, 9}, {4, 25}};
      const auto x = static_cast<std::int64_t>(crt(sys));
      EXPECT_LT(x, 8 * 9 * 25);
      EXPECT_EQ(((x - r1) % 8 + 8) % 8, 0);
      EXPECT_EQ((x - r2) % 9, 0);
      EXPECT_EQ((x - 4) % 25, 0);
    }
  }
}

TEST(DirichletPrime, Examples) {
  EXPECT_EQ(dirichlet_prime(1, 9), 19u);
  EXPECT_EQ(dirichlet_prime(1, 2), 3u);
  EXPECT_EQ(dirichlet_prime(1, 15), 31u);
  EXPECT_THROW(dirichlet_prime(3, 9), ArithmeticError);
  SearchLimits tiny;
  tiny.progression_cap = 1;
  EXPECT_THROW(dirichlet_prime(1, 9, tiny), SearchCapExceeded);
}

TEST(DirichletPrime, InProgression) {
  for (std::uint64_t m : {4u, 8u, 12u, 28u, 44u, 76u}) {
    for (std::int64_t b = 1; b < static_cast<std::int64_t>(m); ++b) {
      if (std::gcd(static_cast<std::uint64_t>(b), m) != 1) continue;
      const auto q = dirichlet_prime(b, m);
      EXPECT_TRUE(is_prime(q));
      EXPECT_EQ(q % m, static_cast<std::uint64_t>(b));
    }
  }
}

TEST(SplitPrime, Examples) {
  EXPECT_EQ(split_prime(5, Zi), (GaussLikeInt{2, 1, Zi}));
  EXPECT_EQ(split_prime(13, Zi), (GaussLikeInt{3, 2, Zi}));
  EXPECT_EQ(split_prime(7, Zw), (GaussLikeInt{3, 1, Zw}));
  EXPECT_THROW(split_prime(3, Zi), ArithmeticError);
  EXPECT_THROW(split_prime(2, Zi), ArithmeticError);
  EXPECT_THROW(split_prime(5, Zw), ArithmeticError);
  try {
    split_prime(11, Zi);
  } catch (const ArithmeticError& e) {
    EXPECT_NE(std::string(e.what()).find("inert or ramified"), std::string::npos);
  }
}

TEST(SplitPrime, CanonicalAndNormPreserving) {
  for (std::uint64_t q = 5; q < 2000; ++q) {
    if (!is_prime(q)) continue;
    for (Ring ring : {Zi, Zw}) {
      const bool splits = ring == Zi ? q % 4 == 1 : q % 3 == 1;
      if (!splits) continue;
      const auto x = split_prime(q, ring);
      EXPECT_EQ(x.norm(), static_cast<std::int64_t>(q));
      EXPECT_GT(x.a, 0);
      EXPECT_GE(x.b, 0);
      EXPECT_EQ(split_prime(q, ring), x);
    }
  }
}

TEST(TwoAdicSplit, Examples) {
  EXPECT_EQ(two_adic_split(12), std::make_pair(2, 3));
  EXPECT_EQ(two_adic_split(9), std::make_pair(0, 9));
  EXPECT_EQ(two_adic_split(16), std::make_pair(4, 1));
}

TEST(NonNormQam, TwoByTwoSpecialCase) {
  const auto c = nonnorm_qam(2);
  EXPECT_EQ(c.q, 5u);
  EXPECT_EQ(c.pi1, (GaussLikeInt{1, 2, Zi}));
  EXPECT_TRUE(is_associate(c.gamma_den, GaussLikeInt{1, -2, Zi}));
  EXPECT_NEAR(std::abs(c.gamma()), 1.0, 1e-15);
  EXPECT_EQ(c.p, 0u);
}

TEST(NonNormQam, FrozenSearchResults) {
  struct Row {
    int n;
    std::uint64_t p, q;
    GaussLikeInt pi1;
  };
  // Independent oracle: smallest prime p = 1 mod 2 n1, smallest primitive
  // root g, b = CRT(5 mod 2^(s+2), g mod p), first prime in b + k 2^(s+2) p.
  const std::vector<Row> rows = {{3, 7, 17, {4, 1, Zi}},   {5, 11, 13, {3, 2, Zi}},
                                 {6, 7, 101, {10, 1, Zi}}, {7, 29, 89, {8, 5, Zi}},
                                 {9, 19, 97, {9, 4, Zi}},  {15, 31, 313, {13, 12, Zi}}};
  for (const auto& r : rows) {
    const auto c = nonnorm_qam(r.n);
    EXPECT_EQ(c.p, r.p) << r.n;
    EXPECT_EQ(c.q, r.q) << r.n;
    EXPECT_EQ(c.pi1, r.pi1) << r.n;
  }
  const auto nine = nonnorm_qam(9);
  EXPECT_EQ(nine.q % 4, 1u);
  EXPECT_EQ(nine.p % 9, 1u);
}

TEST(NonNormHex, Examples) {
  const auto two = nonnorm_hex(2);
  EXPECT_EQ(two.q, 7u);
  EXPECT_EQ(two.pi1, (GaussLikeInt{3, 1, Zw}));
  EXPECT_TRUE(is_associate(two.gamma_den, GaussLikeInt{3, 1, Zw}.conj()));
  // p = 7 for n1 = 3 rules q = 7 out; the search then lands on 31 = N(6 + w3).
  const auto three = nonnorm_hex(3);
  EXPECT_EQ(three.p, 7u);
  EXPECT_EQ(three.q, 31u);
  EXPECT_EQ(three.pi1, (GaussLikeInt{6, 1, Zw}));
  const auto six = nonnorm_hex(6);
  EXPECT_EQ(six.q % 4, 3u);
  EXPECT_THROW(nonnorm_hex(4), ArithmeticError);
  try {
    nonnorm_hex(8);
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("HEX construction limited"), std::string::npos);
  }
}

TEST(ValidateGamma, SearchOutputAlwaysPasses) {
  for (int n = 2; n <= 24; ++n) {
    const auto report = validate_gamma(nonnorm_qam(n));
    EXPECT_TRUE(report.all_passed()) << "qam n=" << n;
    if (n % 4 != 0) EXPECT_TRUE(validate_gamma(nonnorm_hex(n)).all_passed()) << "hex n=" << n;
  }
}

TEST(ValidateGamma, TableEntryFivePasses) {
  const auto cert = certificate_for_gamma(5, FieldTag::QAM, {3, 2, Zi}, {3, -2, Zi});
  const auto report = validate_gamma(cert);
  EXPECT_TRUE(report.all_passed());
  EXPECT_TRUE(report.find("unit_magnitude")->passed);
}

TEST(ValidateGamma, NonUnitMagnitudeFails) {
  NonNormCertificate cert;
  cert.n = 2;
  cert.n1 = 1;
  cert.s = 1;
  cert.q = 2;
  cert.pi1 = {2, 0, Zi};
  cert.gamma_num = {2, 0, Zi};
  cert.gamma_den = {1, 0, Zi};
  const auto report = validate_gamma(cert);
  EXPECT_FALSE(report.find("unit_magnitude")->passed);
  EXPECT_FALSE(report.all_passed());
}

TEST(ValidateGamma, InertnessCheck) {
  auto cert = [](std::uint64_t q, GaussLikeInt pi) {
    NonNormCertificate c;
    c.n = 3;
    c.n1 = 3;
    c.s = 0;
    c.p = 7;
    c.q = q;
    c.pi1 = pi;
    c.gamma_num = pi;
    c.gamma_den = pi.conj();
    return c;
  };
  // 13 = 6 mod 7 is a cube, so 13 splits in the cubic subfield of Q(w7).
  const auto split = validate_gamma(cert(13, {3, 2, Zi}));
  EXPECT_FALSE(split.find("q_inert_mod_p")->passed);
  EXPECT_TRUE(split.tower_independent_passed());
  // 5 has order 6 mod 7: a primitive root, hence inert in the cubic subfield.
  EXPECT_TRUE(validate_gamma(cert(5, {1, 2, Zi})).find("q_inert_mod_p")->passed);
}
