#pragma once

#include "epfem/assembly.hpp"

#include <vector>

namespace epfem {

struct NewtonSettings {
  double eps_newton = 1e-10;
  int max_iters = 25;
  enum class OnFailure { error, halve_step };
  OnFailure on_failure = OnFailure::halve_step;
  SolveSettings linear;
};

struct IterationSample {
  int n_plastic = 0;
  double tangent_seconds = 0.0;
};

struct TimeStepRecord {
  int step = 0;
  double load = 0.0;  // zeta (traction scale) or u_D
  int newton_iters = 0;
  int n_plastic = 0;
  double tangent_seconds = 0.0;  // summed over Newton iterations
  double derived_scalar = 0.0;   // work (VM) or normalized pressure (DP)
  std::vector<IterationSample> iterations;
};

struct NewtonResult {
  Vec u;
  IntegrationState state;
  TimeStepRecord record;
};

/// One time step of the semismooth Newton iteration. Starts from the
/// Dirichlet lift (free dofs taken from u_start when given, else zero), stops
/// on |du|_e / (|u_prev|_e + |u|_e) <= eps_newton (converged immediately when
/// both norms vanish), and commits Ep/Hard from a final constitutive
/// evaluation at the converged displacement. Throws NonConvergenceError when
/// max_iters is exhausted.
NewtonResult newton_solve(const AssemblyCache& cache, const MaterialField& mat,
                          const IntegrationState& state_prev,
                          const Vec& dirichlet, const BoolArray& free_mask,
                          const Vec& f_ext, const NewtonSettings& settings,
                          const Vec* u_start = nullptr);

}  // namespace epfem
