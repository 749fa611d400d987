#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "perfectst/analysis.hpp"

using namespace perfectst;

namespace {

CodeSpec with_generator(const CodeSpec& base, const CMatrix& g) {
  return make_code_spec(base.cert, explicit_generator(g, "test"), base.variant, base.delay);
}

}  // namespace

TEST(CheckUnitary, Examples) {
  const auto id = check_unitary(CMatrix::Identity(3, 3));
  EXPECT_EQ(id.defect, 0.0);
  EXPECT_TRUE(id.passed);
  const auto twice = check_unitary(2.0 * CMatrix::Identity(3, 3));
  EXPECT_DOUBLE_EQ(twice.defect, 3.0);
  EXPECT_FALSE(twice.passed);
  EXPECT_THROW(check_unitary(CMatrix::Zero(2, 3)), std::invalid_argument);
  const double c = std::cos(0.3), s = std::sin(0.3);
  RMatrix rot(2, 2);
  rot << c, -s, s, c;
  EXPECT_TRUE(check_orthogonal(rot).passed);
}

TEST(CheckUnitary, GeneratorsAndVectorization) {
  for (int n : {2, 3, 4, 5, 7}) {
    const auto spec = build_code(n, FieldTag::QAM);
    EXPECT_TRUE(check_unitary(spec.generator.entries).passed) << n;
    EXPECT_TRUE(check_unitary(vectorization_matrix(spec)).passed) << n;
    EXPECT_TRUE(check_orthogonal(real_stacking(vectorization_matrix(spec))).passed) << n;
  }
}

TEST(DifferenceSet, ZeroFirstNineValues) {
  const auto u = difference_set(Spacing::UnitSpacing);
  ASSERT_EQ(u.size(), 9u);
  EXPECT_EQ(u.front(), cdouble(0.0));
  const auto q = difference_set(Spacing::QamSpacing);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(q[i], 2.0 * u[i]);
  EXPECT_EQ(spacing_from_string(to_string(Spacing::QamSpacing)), Spacing::QamSpacing);
}

TEST(MinDet, TwoByTwoExample) {
  const auto spec = example_2x2_spec();
  const auto unit = min_det(spec, Spacing::UnitSpacing);
  EXPECT_NEAR(unit.min_det, 0.05, 1e-12);
  EXPECT_TRUE(unit.exhaustive);
  EXPECT_EQ(unit.search_size, 6560u);
  EXPECT_NEAR(difference_det(spec, unit.argmin_delta), unit.min_det, 1e-15);
  const auto qam = min_det(spec, Spacing::QamSpacing);
  EXPECT_NEAR(qam.min_det, 0.8, 1e-12);
}

TEST(MinDet, ThreadCountDoesNotChangeResult) {
  const auto spec = example_2x2_spec();
  const auto a = min_det(spec, Spacing::UnitSpacing, 10'000'000, 1);
  const auto b = min_det(spec, Spacing::UnitSpacing, 10'000'000, 4);
  EXPECT_EQ(a.min_det, b.min_det);
  EXPECT_EQ(a.argmin_delta, b.argmin_delta);
}

TEST(MinDet, SingleEntryDifference) {
  const auto spec = example_2x2_spec();
  for (cdouble d : {cdouble(1, 0), cdouble(1, 1), cdouble(0, 2)}) {
    EXPECT_NEAR(difference_det(spec, {d, 0.0, 0.0, 0.0}), std::pow(std::abs(d), 4) / 4.0, 1e-12);
  }
}

TEST(MinDet, ScalingAndPhase) {
  const auto spec = build_code(3, FieldTag::QAM);
  const std::vector<cdouble> d = {{1, 0}, {0, 1}, {1, -1}, 0.0, {-1, 0}, 0.0, {0, 1}, 0.0, {1, 1}};
  const double base = difference_det(spec, d);
  EXPECT_GT(base, 0.0);
  auto scaled = d;
  for (auto& v : scaled) v *= 2.0;
  EXPECT_NEAR(difference_det(spec, scaled) / base, 64.0, 1e-9);
  auto rotated = d;
  const cdouble phase = std::polar(1.0, 1.1);
  for (auto& v : rotated) v *= phase;
  EXPECT_NEAR(difference_det(spec, rotated) / base, 1.0, 1e-9);
}

TEST(MinDet, CapAndSampling) {
  const auto spec = build_code(3, FieldTag::QAM);
  EXPECT_THROW(min_det(spec, Spacing::UnitSpacing, 1000), std::length_error);
  const auto a = min_det_sampled(spec, Spacing::UnitSpacing, 2000, 42, 1);
  const auto b = min_det_sampled(spec, Spacing::UnitSpacing, 2000, 42, 3);
  EXPECT_FALSE(a.exhaustive);
  EXPECT_EQ(a.seed, 42u);
  EXPECT_EQ(a.min_det, b.min_det);
  EXPECT_GT(a.min_det, 0.0);
}

TEST(Power, ExhaustiveUniform) {
  const auto report = power_uniformity_exhaustive(example_2x2_spec(), Constellation::qam(2));
  EXPECT_TRUE(report.passed);
  EXPECT_LT(report.max_relative_deviation, 1e-12);
  EXPECT_EQ(report.samples, 256u);
  EXPECT_NEAR(report.entry_energy(0, 1), 2.0, 1e-12);
}

TEST(Power, NonUnitaryGeneratorFails) {
  CMatrix g = CMatrix::Zero(2, 2);
  g(0, 0) = 2.0;
  g(1, 1) = 0.5;
  const auto spec = with_generator(example_2x2_spec(), g);
  EXPECT_FALSE(power_uniformity_exhaustive(spec, Constellation::qam(2)).passed);
  EXPECT_FALSE(power_uniformity_analytic(spec, Constellation::qam(2)).passed);
  EXPECT_FALSE(power_uniformity_montecarlo(spec, Constellation::qam(2), 20000, 1).passed);
}

TEST(Power, MonteCarloAndAnalytic) {
  const auto spec = build_code(3, FieldTag::QAM);
  const auto mc = power_uniformity_montecarlo(spec, Constellation::qam(4), 20000, 7);
  EXPECT_TRUE(mc.passed);
  EXPECT_LT(mc.max_z_score, 4.0);
  const auto an = power_uniformity_analytic(spec, Constellation::qam(4));
  EXPECT_TRUE(an.passed);
  EXPECT_NEAR(an.entry_energy(2, 1), 10.0, 1e-9);
  EXPECT_THROW(power_uniformity_exhaustive(spec, Constellation::qam(4), 1000), std::length_error);
}

TEST(Isometry, FullAndTruncated) {
  EXPECT_TRUE(isometry_check(build_code(4, FieldTag::QAM), 500, 3).passed);
  EXPECT_TRUE(isometry_check(build_code(3, FieldTag::HEX), 500, 3).passed);
  const auto trunc = build_code(3, FieldTag::QAM, Variant::parse("truncated:1"));
  EXPECT_FALSE(isometry_check(trunc, 50, 3).passed);
}

TEST(Normalization, Examples) {
  EXPECT_NEAR(normalization(100.0, 1.0, 2.0).nu_squared, 10.0, 1e-12);
  EXPECT_NEAR(normalization(1000.0, 0.0, 3.0).nu_squared, 1000.0, 1e-9);
  EXPECT_NEAR(normalization(1000.0, 3.0, 3.0).nu_squared, 1.0, 1e-12);
  EXPECT_THROW(normalization(0.0, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(normalization(10.0, 3.0, 2.0), std::invalid_argument);
}

TEST(DetExponent, ApproachesTarget) {
  const auto rows = det_exponent_check(2, 0.05, {1e2, 1e4, 1e8, 1e16}, 1.0);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.target, 1.0);
    EXPECT_NEAR(r.scaled_min_det, r.nu_squared * r.nu_squared * 0.05, 1e-9 * r.scaled_min_det);
  }
  EXPECT_LT(std::abs(rows.back().exponent - 1.0), std::abs(rows.front().exponent - 1.0));
}
