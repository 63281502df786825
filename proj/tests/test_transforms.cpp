#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pdelin/matrix_io.hpp"
#include "pdelin/transforms.hpp"

using namespace pdelin;

namespace {
double max_abs(const Eigen::MatrixXcd& M) { return M.cwiseAbs().maxCoeff(); }

CVector random_vector(int N, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CVector v(static_cast<std::size_t>(N));
  for (auto& x : v) x = cplx(nd(rng), nd(rng));
  return v;
}
}  // namespace

TEST(Transforms, QsftMatchesShiftedDefinition) {
  for (int n : {1, 2, 7, 8, 31}) {
    EXPECT_LT(max_abs(transform_matrix(TransformKind::qsft, n + 1) - oracle::qsft_matrix(n)), 1e-13) << n;
  }
}

TEST(Transforms, QctMatchesCosineDefinition) {
  for (int n : {1, 2, 5, 16, 33}) {
    const Eigen::MatrixXcd C = transform_matrix(TransformKind::qct, n + 1);
    EXPECT_LT(max_abs(C - oracle::qct_matrix(n).cast<cplx>()), 1e-13) << n;
    EXPECT_LT(C.imag().cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Transforms, QftIsUnitaryDft) {
  for (int N : {1, 3, 16, 17}) {
    EXPECT_LT(max_abs(transform_matrix(TransformKind::qft, N) - oracle::dft_matrix(N)), 1e-13);
  }
}

TEST(Transforms, PermutationFactorsThroughFourier) {
  for (int N : {2, 5, 12}) {
    const Eigen::MatrixXcd F = oracle::dft_matrix(N);
    const Eigen::MatrixXcd T = transform_matrix(TransformKind::phase_T, N);
    const Eigen::MatrixXcd P = transform_matrix(TransformKind::perm_P, N);
    EXPECT_LT(max_abs(P - F * T * F.inverse()), 1e-13);
    EXPECT_LT(max_abs(P - oracle::cyclic_permutation(N).cast<cplx>()), 0.0 + 1e-300);
  }
}

TEST(Transforms, InversesRoundTrip) {
  for (auto kind : {TransformKind::qsft, TransformKind::qct, TransformKind::qft, TransformKind::phase_R,
                    TransformKind::phase_S, TransformKind::phase_T, TransformKind::perm_P}) {
    for (int N : {2, 9, 64}) {
      const CVector v = random_vector(N, 11);
      const CVector w = transform(kind, transform(kind, v), true);
      for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(w[i] - v[i]), 0.0, 1e-13) << to_string(kind);
    }
  }
}

TEST(Transforms, TensorApplyIsAxisWise) {
  const int n = 4, N = n + 1;
  const CVector v = random_vector(N * N, 5);
  const CVector w = tensor_apply(TransformKind::qsft, 2, v, all_axes(2));
  const Eigen::MatrixXcd F = oracle::qsft_matrix(n);
  // row-major N x N array: axis 0 is the slow index
  Eigen::MatrixXcd V(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) V(i, j) = v[static_cast<std::size_t>(i * N + j)];
  }
  const Eigen::MatrixXcd ref = F * V * F.transpose();
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) EXPECT_NEAR(std::abs(w[static_cast<std::size_t>(i * N + j)] - ref(i, j)), 0.0, 1e-13);
  }
  EXPECT_EQ(tensor_side(125, 3), 5);
  EXPECT_THROW(tensor_side(124, 3), InvalidArgument);
}

TEST(Transforms, Errors) {
  CVector empty;
  EXPECT_THROW(apply_transform(TransformKind::qft, empty), InvalidArgument);
  CVector one(1, cplx(1.0));
  EXPECT_THROW(apply_transform(TransformKind::qct, one), InvalidArgument);
  EXPECT_THROW(transform_matrix(TransformKind::qft, 10, false, 8), TooLarge);
}

TEST(MatrixIo, CoordinateRoundTrip) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(3, 4);
  M(0, 1) = cplx(2.5, -1.0);
  M(2, 3) = cplx(std::numbers::pi, 0.0);
  M(1, 0) = cplx(-7.0, 0.0);
  const Eigen::MatrixXcd R = from_coordinate_string(to_coordinate_string(M));
  ASSERT_EQ(R.rows(), 3);
  ASSERT_EQ(R.cols(), 4);
  EXPECT_EQ(max_abs(R - M), 0.0);
}
