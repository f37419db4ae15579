#include "epfem/linalg.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <cmath>

namespace epfem {

SpMat from_triplets(const std::vector<int>& rows, const std::vector<int>& cols,
                    const std::vector<double>& values, int n_rows,
                    int n_cols) {
  if (rows.size() != cols.size() || rows.size() != values.size())
    throw Error("from_triplets: array length mismatch");
  std::vector<Triplet> triplets;
  triplets.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= n_rows || cols[k] < 0 || cols[k] >= n_cols)
      throw Error("from_triplets: index out of range at entry " +
                  std::to_string(k));
    triplets.emplace_back(rows[k], cols[k], values[k]);
  }
  SpMat A(n_rows, n_cols);
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

SpMat sandwich(const SpMat& B, const SpMat& D) {
  if (D.rows() != D.cols() || D.cols() != B.rows())
    throw Error("sandwich: dimension mismatch");
  const SpMat DB = D * B;
  SpMat K = B.transpose() * DB;
  K.makeCompressed();
  return K;
}

namespace {

// Gather the restriction K[free, free] together with the free-index map.
SpMat restrict_matrix(const SpMat& K, const BoolArray& free_mask,
                      std::vector<int>& free_index) {
  const int n = static_cast<int>(K.rows());
  std::vector<int> compact(n, -1);
  free_index.clear();
  for (int i = 0; i < n; ++i) {
    if (free_mask(i)) {
      compact[i] = static_cast<int>(free_index.size());
      free_index.push_back(i);
    }
  }
  std::vector<Triplet> triplets;
  triplets.reserve(K.nonZeros());
  for (int j = 0; j < K.outerSize(); ++j) {
    if (compact[j] < 0) continue;
    for (SpMat::InnerIterator it(K, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (compact[i] >= 0)
        triplets.emplace_back(compact[i], compact[j], it.value());
    }
  }
  const int m = static_cast<int>(free_index.size());
  SpMat Kff(m, m);
  Kff.setFromTriplets(triplets.begin(), triplets.end());
  return Kff;
}

}  // namespace

Vec restricted_solve(const SpMat& K, const Vec& rhs, const BoolArray& free_mask,
                     const SolveSettings& settings) {
  if (K.rows() != K.cols() || K.rows() != rhs.size() ||
      free_mask.size() != rhs.size())
    throw Error("restricted_solve: dimension mismatch");

  std::vector<int> free_index;
  const SpMat Kff = restrict_matrix(K, free_mask, free_index);
  const int m = static_cast<int>(free_index.size());
  Vec rhs_f(m);
  for (int k = 0; k < m; ++k) rhs_f(k) = rhs(free_index[k]);

  Vec x_f = Vec::Zero(m);
  const double rhs_norm = rhs_f.norm();
  if (m > 0 && rhs_norm > 0.0) {
    if (settings.method == LinearSolver::direct) {
      Eigen::SimplicialLDLT<SpMat> ldlt(Kff);
      if (ldlt.info() != Eigen::Success)
        throw SolverError("restricted_solve: factorization failed",
                          std::numeric_limits<double>::infinity());
      x_f = ldlt.solve(rhs_f);
      // refinement sweeps keep the residual contract on ill-conditioned
      // limit-load systems
      for (int sweep = 0; sweep < 3; ++sweep) {
        const Vec r = rhs_f - Kff * x_f;
        if (r.norm() <= settings.rel_tol * rhs_norm) break;
        x_f += ldlt.solve(r);
      }
    } else {
      Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                               Eigen::DiagonalPreconditioner<double>>
          cg(Kff);
      cg.setTolerance(settings.rel_tol);
      cg.setMaxIterations(10 * static_cast<Eigen::Index>(m));
      x_f = cg.solve(rhs_f);
    }
    const double residual = (rhs_f - Kff * x_f).norm() / rhs_norm;
    if (!std::isfinite(residual) || residual > settings.rel_tol)
      throw SolverError("restricted_solve: residual " +
                            std::to_string(residual) + " above tolerance",
                        residual);
  }

  Vec x = Vec::Zero(rhs.size());
  for (int k = 0; k < m; ++k) x(free_index[k]) = x_f(k);
  return x;
}

double energy_norm(const SpMat& K, const Vec& v) {
  if (K.rows() != v.size()) throw Error("energy_norm: dimension mismatch");
  const double q = v.dot(K * v);
  return std::sqrt(std::max(q, 0.0));
}

}  // namespace epfem
