// Foundations: points and shapes, compensated sums, the deterministic RNG,
// the error hierarchy, and the spectral helpers everything else builds on.
#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mmx/errors.hpp"
#include "mmx/linalg.hpp"
#include "mmx/point.hpp"
#include "mmx/rng.hpp"

namespace mmx {
namespace {

TEST(Shape, SizesAndBlockOffsets) {
  Shape v = Shape::vector(5);
  Shape m = Shape::matrix(3, 4);
  Shape t = Shape::tuple({v, m, Shape::vector(2)});
  EXPECT_EQ(v.size(), 5);
  EXPECT_EQ(m.size(), 12);
  EXPECT_EQ(t.size(), 19);
  EXPECT_EQ(t.block_offset(0), 0);
  EXPECT_EQ(t.block_offset(1), 5);
  EXPECT_EQ(t.block_offset(2), 17);
  EXPECT_TRUE(v == Shape::vector(5));
  EXPECT_TRUE(v != Shape::vector(6));
  EXPECT_TRUE(m != Shape::matrix(4, 3));
}

TEST(Point, ConstructionChecksSizeAgainstShape) {
  EXPECT_THROW(Point(Vector::Zero(3), Shape::vector(4)), ConfigError);
  EXPECT_NO_THROW(Point(Vector::Zero(12), Shape::matrix(3, 4)));
}

TEST(Point, ConcatAndBlockRoundTrip) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  Point a = Point::of_vector({1.0, 2.0, 3.0});
  Point b = Point::of_matrix(m);
  Point c = Point::of_scalar(7.0);
  Point joined = Point::concat({a, b, c});
  EXPECT_EQ(joined.size(), 8);
  EXPECT_EQ(joined.block(0).flat(), a.flat());
  EXPECT_EQ(joined.block(1).flat(), b.flat());
  EXPECT_DOUBLE_EQ(joined.block(2).scalar(), 7.0);
  // The matrix view is zero-copy and column-major, matching of_matrix.
  auto view = joined.block_as_matrix(1);
  EXPECT_DOUBLE_EQ(view(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(view(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(view(1, 0), 3.0);
  EXPECT_DOUBLE_EQ(view(1, 1), 4.0);
  EXPECT_THROW(joined.block_as_matrix(0), ConfigError);
}

TEST(Point, ArithmeticAndBlend) {
  Point a = Point::of_vector({1.0, 0.0});
  Point b = Point::of_vector({0.0, 2.0});
  EXPECT_DOUBLE_EQ((a + b).flat()[1], 2.0);
  EXPECT_DOUBLE_EQ((a - b).flat()[1], -2.0);
  EXPECT_DOUBLE_EQ(a.dot(b), 0.0);
  EXPECT_DOUBLE_EQ((2.0 * a).norm(), 2.0);
  Point mid = a.blend_toward(b, 0.5);
  EXPECT_DOUBLE_EQ(mid.flat()[0], 0.5);
  EXPECT_DOUBLE_EQ(mid.flat()[1], 1.0);
  // step = 0 and step = 1 return the endpoints exactly.
  EXPECT_EQ(a.blend_toward(b, 0.0).flat(), a.flat());
  EXPECT_EQ(a.blend_toward(b, 1.0).flat(), b.flat());
  EXPECT_THROW(a.dot(Point::of_vector({1.0, 2.0, 3.0})), ConfigError);
}

TEST(Kahan, CompensatedScalarSumBeatsNaiveSum) {
  // 1 + 1e-16 repeated: naive addition in doubles loses every tiny term.
  KahanSum kahan;
  double naive = 1.0;
  kahan.add(1.0);
  for (int i = 0; i < 10000; ++i) {
    kahan.add(1e-16);
    naive += 1e-16;
  }
  EXPECT_DOUBLE_EQ(naive, 1.0);  // all increments lost
  EXPECT_NEAR(kahan.value(), 1.0 + 1e-12, 1e-15);
}

TEST(Kahan, VectorSumMatchesLongDoubleReference) {
  Rng rng(99);
  KahanVector kahan(4);
  std::vector<long double> reference(4, 0.0L);
  for (int i = 0; i < 5000; ++i) {
    Vector v = rng.normal_vector(4) * std::pow(10.0, (i % 7) - 3);
    kahan.add(v);
    for (int j = 0; j < 4; ++j) reference[j] += static_cast<long double>(v[j]);
  }
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(kahan.value()[j], static_cast<double>(reference[j]),
                1e-9 * std::abs(static_cast<double>(reference[j])) + 1e-12);
  }
}

TEST(Rng, DeterministicAcrossInstances) {
  Rng a(123), b(123), c(124);
  Vector va = a.normal_vector(8);
  Vector vb = b.normal_vector(8);
  Vector vc = c.normal_vector(8);
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
}

TEST(Rng, UniformRangeAndMatrixShape) {
  Rng rng(5);
  Matrix m = rng.uniform_matrix(7, 3);
  EXPECT_EQ(m.rows(), 7);
  EXPECT_EQ(m.cols(), 3);
  EXPECT_GE(m.minCoeff(), 0.0);
  EXPECT_LT(m.maxCoeff(), 1.0);
  Matrix shifted = rng.uniform_matrix(50, 50, -2.0, 3.0);
  EXPECT_GE(shifted.minCoeff(), -2.0);
  EXPECT_LT(shifted.maxCoeff(), 3.0);
}

TEST(Rng, NormalMomentsAreSane) {
  Rng rng(2024);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum_sq / n, 1.0, 0.02);
}

TEST(Rng, DerivedSeedsDecorrelateStreams) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 100; ++s) {
    seeds.insert(Rng::derive_seed(42, s));
  }
  EXPECT_EQ(seeds.size(), 100u);  // no collisions across streams
  EXPECT_EQ(Rng::derive_seed(42, 7), Rng::derive_seed(42, 7));
  EXPECT_NE(Rng::derive_seed(42, 7), Rng::derive_seed(43, 7));
}

TEST(Errors, HierarchyAndMessages) {
  ConfigError config("bad knob");
  EXPECT_STREQ(config.what(), "bad knob");
  // Capability problems are a species of configuration problem: both mean
  // "this request cannot be served", and both map to the same exit code.
  CapabilityError capability("no oracle");
  EXPECT_NE(dynamic_cast<ConfigError*>(&capability), nullptr);
  EXPECT_NE(dynamic_cast<Error*>(&capability), nullptr);
  NumericalError numerical("diverged");
  Error* numerical_base = &numerical;
  EXPECT_EQ(dynamic_cast<ConfigError*>(numerical_base), nullptr);
  IoError io("disk");
  EXPECT_NE(dynamic_cast<Error*>(&io), nullptr);
}

TEST(Linalg, SpectralAndNuclearNormsMatchEigenSvd) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = rng.normal_matrix(6, 4);
    Eigen::JacobiSVD<Matrix> svd(m);
    const double spec = svd.singularValues()[0];
    const double nuc = svd.singularValues().sum();
    EXPECT_NEAR(detail::spectral_norm(m), spec, 1e-9 * std::max(1.0, spec));
    EXPECT_NEAR(detail::nuclear_norm(m), nuc, 1e-9 * std::max(1.0, nuc));
  }
}

TEST(Linalg, TopSingularTripleReconstructs) {
  Rng rng(77);
  Matrix m = rng.normal_matrix(5, 7);
  auto triple = detail::top_singular_triple(m);
  // u and v are unit vectors with sigma = u' M v equal to the top value.
  EXPECT_NEAR(triple.u.norm(), 1.0, 1e-10);
  EXPECT_NEAR(triple.v.norm(), 1.0, 1e-10);
  EXPECT_NEAR(triple.sigma, triple.u.dot(m * triple.v), 1e-9);
  Eigen::JacobiSVD<Matrix> svd(m);
  EXPECT_NEAR(triple.sigma, svd.singularValues()[0], 1e-9);
}

}  // namespace
}  // namespace mmx
