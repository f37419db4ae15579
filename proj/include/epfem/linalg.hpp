#pragma once

#include "epfem/types.hpp"

#include <vector>

namespace epfem {

/// Accumulate a triplet stream into a compressed sparse matrix; duplicate
/// (i, j) entries are summed. Throws on out-of-range indices.
SpMat from_triplets(const std::vector<int>& rows, const std::vector<int>& cols,
                    const std::vector<double>& values, int n_rows, int n_cols);

/// B^T D B for a square D; symmetric whenever D is.
SpMat sandwich(const SpMat& B, const SpMat& D);

enum class LinearSolver { direct, conjugate_gradient };

struct SolveSettings {
  LinearSolver method = LinearSolver::direct;
  double rel_tol = 1e-10;
};

/// Solve K[free,free] x = rhs[free]; the returned vector is zero on
/// constrained dofs. Throws SolverError (with the achieved residual) when the
/// restricted system cannot be solved to rel_tol.
Vec restricted_solve(const SpMat& K, const Vec& rhs, const BoolArray& free_mask,
                     const SolveSettings& settings = {});

/// sqrt(v' K v), with tiny negative round-off clamped to zero.
double energy_norm(const SpMat& K, const Vec& v);

}  // namespace epfem
