#include "epfem/solver.hpp"

#include <chrono>

namespace epfem {

NewtonResult newton_solve(const AssemblyCache& cache, const MaterialField& mat,
                          const IntegrationState& state_prev,
                          const Vec& dirichlet, const BoolArray& free_mask,
                          const Vec& f_ext, const NewtonSettings& settings,
                          const Vec* u_start) {
  if (settings.eps_newton <= 0.0 || settings.max_iters < 1)
    throw Error("newton_solve: invalid settings");

  NewtonResult result;
  Vec u = dirichlet;
  if (u_start)  // warm start on the free dofs keeps the active set close
    for (Eigen::Index k = 0; k < u.size(); ++k)
      if (free_mask(k)) u(k) = (*u_start)(k);
  bool converged = false;

  for (int iter = 1; iter <= settings.max_iters; ++iter) {
    const Mat E = cache.strains(u);
    const IntegrationState st = evaluate_constitutive(E, state_prev, mat);
    const Vec F = internal_forces(cache, st.S);

    const auto t0 = std::chrono::steady_clock::now();
    const SpMat K =
        assemble_tangent_stiffness(cache, st.DS, st.plastic_mask);
    const double tangent_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    result.record.iterations.push_back(
        {static_cast<int>(st.plastic_mask.count()), tangent_seconds});
    result.record.tangent_seconds += tangent_seconds;
    result.record.newton_iters = iter;

    const Vec du =
        restricted_solve(K, f_ext - F, free_mask, settings.linear);
    const double norm_prev = energy_norm(cache.K_elast, u);
    u += du;
    const double norm_curr = energy_norm(cache.K_elast, u);
    const double denom = norm_prev + norm_curr;
    if (denom == 0.0 ||
        energy_norm(cache.K_elast, du) <= settings.eps_newton * denom) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergenceError(
        "newton_solve: no convergence within " +
            std::to_string(settings.max_iters) + " iterations",
        0.0);

  // Commit the plastic state from the converged displacement.
  result.u = std::move(u);
  result.state =
      evaluate_constitutive(cache.strains(result.u), state_prev, mat);
  result.record.n_plastic = static_cast<int>(result.state.plastic_mask.count());
  return result;
}

}  // namespace epfem
