#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "specbound/linmap.hpp"
#include "support/errors.hpp"
#include "support/oracles.hpp"
#include "support/reference_matrices.hpp"

using namespace specbound;
using testutil::code_of;

namespace {

double scalar(const MapValue& v) { return std::get<double>(v); }

/// One instance of every map variant sized for n x n input.
std::vector<LinMapSpec> all_variants(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<std::size_t> cols(1, n);
  const std::size_t i = idx(rng);
  std::size_t j = idx(rng);
  if (j == i) j = (i + 1) % n;
  return {UniformEntryAverage{},
          NormalizedTrace{},
          CoordinateDiag{idx(rng)},
          PairAverage{i, j},
          TraceForm{oracle::random_weight(n, rng)},
          Compression{oracle::random_frame(n, cols(rng), rng)}};
}

/// Phi(M^2) - Phi(M)^2 evaluated literally from apply_map().
MapValue direct_variance(const LinMapSpec& map, const Matrix& m) {
  const MapValue phi = apply_map(map, m);
  const MapValue phi_sq = apply_map(map, matmul(m, m));
  if (is_functional(map)) return scalar(phi_sq) - scalar(phi) * scalar(phi);
  const Matrix& p = std::get<Matrix>(phi);
  return std::get<Matrix>(phi_sq) - matmul(p, p);
}

}  // namespace

TEST(Apply, ReferenceValues) {
  const Matrix x = min_symmetrize(refmat::nonsym3_a()).x;
  EXPECT_NEAR(scalar(apply_map(UniformEntryAverage{}, x)), 19.0 / 3.0, 1e-15);
  EXPECT_EQ(scalar(apply_map(NormalizedTrace{}, Matrix::identity(6))), 1.0);
  EXPECT_EQ(scalar(apply_map(CoordinateDiag{2}, refmat::nonsym3_a())), 5.0);
  EXPECT_EQ(scalar(apply_map(PairAverage{0, 2}, refmat::nonsym3_a())), 3.0);
  EXPECT_EQ(label(PairAverage{0, 2}), "pair:1,3");
  EXPECT_EQ(label(CoordinateDiag{2}), "diag:3");
}

TEST(Apply, CompressionIsVtMV) {
  const Matrix a = refmat::sym4();
  const Matrix block = std::get<Matrix>(apply_map(Compression{ColumnFrame::leading_identity(4, 2)}, a));
  EXPECT_EQ(block, make_matrix({{4, 0}, {0, 5}}));
}

TEST(Apply, Errors) {
  EXPECT_EQ(code_of([] { apply_map(CoordinateDiag{3}, Matrix::identity(3)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { apply_map(TraceForm{Matrix::diagonal({0.5, 0.5})}, Matrix::identity(3)); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { apply_map(PairAverage{1, 1}, Matrix::identity(3)); }), ErrorCode::InvalidMap);
  EXPECT_EQ(code_of([] { apply_map(TraceForm{Matrix::diagonal({2, -1})}, Matrix::identity(2)); }),
            ErrorCode::InvalidMap);
  const ColumnFrame skew(2, 1, {1.0, 1.0});
  EXPECT_EQ(code_of([&] { apply_map(Compression{skew}, Matrix::identity(2)); }), ErrorCode::InvalidMap);
}

TEST(Variance, CoordinateDiagIsOffDiagonalRowSquares) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 8;
    const Matrix m = oracle::random_signed_symmetric(n, rng);
    for (std::size_t k = 0; k < n; ++k) {
      double off = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) off += m(k, j) * m(k, j);
      const VarianceTerm v = variance(CoordinateDiag{k}, m);
      EXPECT_NEAR(*v.scalar_value, off, 1e-12 * std::max(1.0, off));
      EXPECT_NEAR(*v.scalar_value, scalar(direct_variance(CoordinateDiag{k}, m)), 1e-10 * std::max(1.0, off));
    }
  }
}

TEST(Variance, PairAverageClosedFormMatchesDirectEvaluation) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 8;
    const Matrix m = oracle::random_signed_symmetric(n, rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double direct = scalar(direct_variance(PairAverage{i, j}, m));
        const double closed = *variance(PairAverage{i, j}, m).scalar_value;
        EXPECT_NEAR(closed, direct, 1e-10 * std::max(1.0, direct));
      }
  }
}

TEST(Variance, ReferencePairTerm) {
  // Min-symmetrization of nonsym3_a, pair (2,3): (10 + 13)/2 + (1 - 5)^2/4 = 15.5.
  const Matrix x = min_symmetrize(refmat::nonsym3_a()).x;
  EXPECT_NEAR(*variance(PairAverage{1, 2}, x).scalar_value, 15.5, 1e-13);
  EXPECT_NEAR(*variance(CoordinateDiag{2}, x).scalar_value, 13.0, 1e-13);
}

TEST(Variance, VanishesOnIdentity) {
  std::mt19937_64 rng(8);
  for (std::size_t n = 2; n <= 6; ++n)
    for (const auto& map : all_variants(n, rng)) {
      const VarianceTerm v = variance(map, Matrix::identity(n));
      EXPECT_NEAR(v.sqrt_lambda_max, 0.0, 1e-7) << label(map);
      if (v.scalar_value) {
        EXPECT_NEAR(*v.scalar_value, 0.0, 1e-14) << label(map);
      }
    }
}

TEST(Variance, RequiresSymmetricInput) {
  EXPECT_EQ(code_of([] { variance(NormalizedTrace{}, refmat::nonsym3_a()); }), ErrorCode::NotSymmetric);
}

TEST(Validate, BuiltInFamilies) {
  EXPECT_TRUE(validate(NormalizedTrace{}, 1).passed);
  EXPECT_TRUE(validate(NormalizedTrace{}, 987654321).passed);
  EXPECT_TRUE(validate(UniformEntryAverage{}, 3, 7).passed);
  EXPECT_TRUE(validate(CoordinateDiag{4}, 3).passed);
  EXPECT_TRUE(validate(PairAverage{0, 3}, 3).passed);
  EXPECT_TRUE(validate(Compression{ColumnFrame::leading_identity(5, 2)}, 1).passed);

  const auto bad = validate(TraceForm{Matrix::diagonal({2, -1})}, 1);
  EXPECT_FALSE(bad.passed);
  EXPECT_NE(bad.message.find("positive semidefinite"), std::string::npos);

  EXPECT_FALSE(validate(PairAverage{2, 2}, 1).passed);
  EXPECT_FALSE(validate(TraceForm{Matrix::diagonal({0.5, 0.25})}, 1).passed);
  EXPECT_FALSE(validate(Compression{ColumnFrame(2, 1, {1.0, 1.0})}, 1).passed);
  EXPECT_FALSE(validate(CoordinateDiag{5}, 1, 3).passed);
}

TEST(Validate, RandomWeightsAndFrames) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 6;
    const auto w = validate(TraceForm{oracle::random_weight(n, rng)}, t);
    EXPECT_TRUE(w.passed) << w.message;
    const auto v = validate(Compression{oracle::random_frame(n, 1 + t % n, rng)}, t);
    EXPECT_TRUE(v.passed) << v.message;
  }
}

// Kadison, Bhatia-Davis and the half-spread consequence, over every variant.
TEST(VarianceProperties, KadisonBhatiaDavisHalfSpread) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + t % 11;
    const Matrix m = oracle::random_signed_symmetric(n, rng);
    const double fro2 = m.frobenius_norm() * m.frobenius_norm();
    const auto spec = symmetric_eigenvalues(m);
    const double spread = spec.max() - spec.min();
    const double bd = spread * spread / 4.0;

    for (const auto& map : all_variants(n, rng)) {
      const VarianceTerm v = variance(map, m);
      if (v.scalar_value) {
        EXPECT_GE(v.unclamped, -1e-10 * fro2) << label(map);
        EXPECT_LE(*v.scalar_value, bd + 1e-8 * std::max(1.0, bd)) << label(map);
        EXPECT_LE(std::sqrt(*v.scalar_value), spread / 2 + 1e-8) << label(map);
      } else {
        ASSERT_TRUE(v.matrix_value.has_value());
        const auto gspec = symmetric_eigenvalues(*v.matrix_value);
        EXPECT_GE(gspec.min(), -1e-10 * fro2) << label(map);
        EXPECT_LE(gspec.max(), bd + 1e-8 * std::max(1.0, bd)) << label(map);
        EXPECT_LE(v.sqrt_lambda_max, spread / 2 + 1e-8) << label(map);
      }
    }
  }
}

TEST(VarianceProperties, MapValueBelowLargestEigenvalue) {
  std::mt19937_64 rng(77);
  for (std::uint64_t s = 0; s < 500; ++s) {
    const Matrix x = oracle::suite_matrix(s, true);
    const double lmax = symmetric_eigenvalues(x).max();
    for (const auto& map : all_variants(x.n(), rng)) {
      EXPECT_LE(lambda_max_of(apply_map(map, x)), lmax + 1e-8 * std::max(1.0, lmax)) << label(map);
    }
  }
}

TEST(VarianceProperties, Linearity) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + t % 9;
    const Matrix m = oracle::random_signed_symmetric(n, rng);
    const Matrix k = oracle::random_signed_symmetric(n, rng);
    const double alpha = coef(rng), beta = coef(rng);
    const Matrix combo = alpha * m + beta * k;
    for (const auto& map : all_variants(n, rng)) {
      const MapValue lhs = apply_map(map, combo);
      const MapValue fm = apply_map(map, m);
      const MapValue fk = apply_map(map, k);
      if (is_functional(map)) {
        const double rhs = alpha * scalar(fm) + beta * scalar(fk);
        EXPECT_LE(std::abs(scalar(lhs) - rhs), 1e-10 * std::max(1.0, std::abs(rhs))) << label(map);
      } else {
        const Matrix rhs = alpha * std::get<Matrix>(fm) + beta * std::get<Matrix>(fk);
        EXPECT_LE((std::get<Matrix>(lhs) - rhs).frobenius_norm(), 1e-10 * std::max(1.0, rhs.frobenius_norm()));
      }
    }
  }
}
