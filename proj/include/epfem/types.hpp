#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace epfem {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;
using BoolMat = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Restricted linear system could not be solved to the requested residual.
struct SolverError : Error {
  SolverError(const std::string& msg, double residual_)
      : Error(msg), residual(residual_) {}
  double residual;
};

/// Newton iteration exhausted its iteration budget.
struct NonConvergenceError : Error {
  NonConvergenceError(const std::string& msg, double last_increment_)
      : Error(msg), last_increment(last_increment_) {}
  double last_increment;
};

}  // namespace epfem
