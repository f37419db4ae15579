#include "epfem/linalg.hpp"

#include <doctest.h>

#include <random>

using namespace epfem;

namespace {

Mat dense(const SpMat& A) { return Mat(A); }

}  // namespace

TEST_CASE("from_triplets sums duplicates") {
  const SpMat A = from_triplets({0, 0}, {0, 0}, {2.0, 3.0}, 2, 2);
  CHECK(A.coeff(0, 0) == doctest::Approx(5.0));
  CHECK(A.nonZeros() == 1);
}

TEST_CASE("from_triplets on an empty stream gives a zero matrix") {
  const SpMat A = from_triplets({}, {}, {}, 3, 4);
  CHECK(A.nonZeros() == 0);
  CHECK(A.rows() == 3);
  CHECK(A.cols() == 4);
}

TEST_CASE("from_triplets equals dense accumulation on random instances") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> index(0, 7);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<int> rows, cols;
  std::vector<double> values;
  Mat expected = Mat::Zero(8, 8);
  for (int k = 0; k < 200; ++k) {
    const int i = index(rng), j = index(rng);
    const double v = value(rng);
    rows.push_back(i);
    cols.push_back(j);
    values.push_back(v);
    expected(i, j) += v;
  }
  const SpMat A = from_triplets(rows, cols, values, 8, 8);
  CHECK((dense(A) - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("from_triplets rejects out-of-range indices") {
  CHECK_THROWS_AS(from_triplets({5}, {0}, {1.0}, 3, 3), Error);
  CHECK_THROWS_AS(from_triplets({0}, {-1}, {1.0}, 3, 3), Error);
}

TEST_CASE("sandwich special cases") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  Mat Bd = Mat::Zero(6, 4);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j)
      if (value(rng) > 0.0) Bd(i, j) = value(rng);
  const SpMat B = Bd.sparseView();

  SpMat I(6, 6);
  I.setIdentity();
  const SpMat BtB = sandwich(B, I);
  CHECK((dense(BtB) - Bd.transpose() * Bd).cwiseAbs().maxCoeff() <= 1e-13);
  Eigen::SelfAdjointEigenSolver<Mat> eig(dense(BtB));
  CHECK(eig.eigenvalues().minCoeff() >= -1e-12);

  const SpMat zero(6, 6);
  CHECK(sandwich(B, zero).nonZeros() == 0);

  CHECK_THROWS_AS(sandwich(B, SpMat(5, 5)), Error);
}

TEST_CASE("sandwich equals the dense triple product") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  Mat Bd = Mat::Zero(9, 6), Dd = Mat::Zero(9, 9);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 6; ++j)
      if (value(rng) > -0.2) Bd(i, j) = value(rng);
    for (int j = 0; j < 9; ++j)
      if (value(rng) > 0.3) Dd(i, j) = value(rng);
  }
  const Mat expected = Bd.transpose() * Dd * Bd;
  const Mat got = dense(sandwich(Bd.sparseView(), Dd.sparseView()));
  CHECK((got - expected).cwiseAbs().maxCoeff() <=
        1e-10 * expected.cwiseAbs().maxCoeff());
}

TEST_CASE("restricted_solve trivial cases") {
  SpMat I(3, 3);
  I.setIdentity();
  Vec rhs = Vec::Zero(3);
  rhs(0) = 1.0;
  const Vec x = restricted_solve(I, rhs, BoolArray::Constant(3, true));
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x.tail(2).cwiseAbs().maxCoeff() <= 1e-15);

  // decoupled 2x2 with one constrained dof
  std::vector<Triplet> trip = {{0, 0, 2.0}, {1, 1, 2.0}};
  SpMat K(2, 2);
  K.setFromTriplets(trip.begin(), trip.end());
  Vec rhs2(2);
  rhs2 << 2.0, 4.0;
  BoolArray mask(2);
  mask << true, false;
  const Vec x2 = restricted_solve(K, rhs2, mask);
  CHECK(x2(0) == doctest::Approx(1.0));
  CHECK(x2(1) == 0.0);
}

TEST_CASE("restricted_solve matches a dense solve on random SPD systems") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  const int n = 20;
  Mat A = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = value(rng);
  Mat Kd = A.transpose() * A + 0.5 * Mat::Identity(n, n);
  Vec rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = value(rng);
  BoolArray mask(n);
  int n_free = 0;
  for (int i = 0; i < n; ++i) {
    mask(i) = value(rng) > -0.4;
    n_free += mask(i);
  }
  REQUIRE(n_free > 0);

  for (LinearSolver method :
       {LinearSolver::direct, LinearSolver::conjugate_gradient}) {
    SolveSettings settings;
    settings.method = method;
    const Vec x = restricted_solve(Kd.sparseView(), rhs, mask, settings);

    std::vector<int> free;
    for (int i = 0; i < n; ++i)
      if (mask(i)) free.push_back(i);
    Mat Kff(n_free, n_free);
    Vec rf(n_free);
    for (int a = 0; a < n_free; ++a) {
      rf(a) = rhs(free[a]);
      for (int b = 0; b < n_free; ++b) Kff(a, b) = Kd(free[a], free[b]);
    }
    const Vec xf = Kff.ldlt().solve(rf);
    for (int a = 0; a < n_free; ++a)
      CHECK(x(free[a]) == doctest::Approx(xf(a)).epsilon(1e-9));
    for (int i = 0; i < n; ++i)
      if (!mask(i)) CHECK(x(i) == 0.0);
  }
}

TEST_CASE("restricted_solve reports singular systems") {
  SpMat K(2, 2);  // rank deficient
  std::vector<Triplet> trip = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0},
                               {1, 1, 1.0}};
  K.setFromTriplets(trip.begin(), trip.end());
  Vec rhs(2);
  rhs << 1.0, -1.0;  // incompatible with the rank-1 range
  CHECK_THROWS_AS(restricted_solve(K, rhs, BoolArray::Constant(2, true)),
                  SolverError);
}

TEST_CASE("energy_norm") {
  SpMat I(2, 2);
  I.setIdentity();
  Vec v(2);
  v << 3.0, 4.0;
  CHECK(energy_norm(I, v) == doctest::Approx(5.0));
  CHECK(energy_norm(I, Vec::Zero(2)) == 0.0);

  std::mt19937 rng(29);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  Mat A = Mat::Zero(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) A(i, j) = value(rng);
  const Mat K = A.transpose() * A;
  Vec w(6);
  for (int i = 0; i < 6; ++i) w(i) = value(rng);
  CHECK(energy_norm(K.sparseView(), w) ==
        doctest::Approx(std::sqrt(w.dot(K * w))).epsilon(1e-12));
}
