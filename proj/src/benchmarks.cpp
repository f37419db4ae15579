#include "epfem/benchmarks.hpp"

#include <cmath>

namespace epfem {

namespace {

Vec direction_vector(int dim, int axis, double value) {
  Vec v = Vec::Zero(dim);
  v(axis) = value;
  return v;
}

Vec cell_mean_hardening(const Mesh& mesh, const AssemblyCache& cache,
                        const Mat& Hard) {
  const int n_q = cache.n_int / mesh.n_elements();
  Vec values(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    double acc = 0.0;
    for (int q = 0; q < n_q; ++q)
      acc += voigt::stress_norm(Hard.col(e * n_q + q));
    values(e) = acc / n_q;
  }
  return values;
}

}  // namespace

double vm_load_scale(double t) {
  if (t <= 1.0) return t;
  if (t <= 3.0) return 2.0 - t;
  return t - 4.0;
}

RunResults run_elastic(const BenchmarkConfig& config) {
  RunResults results;
  results.mesh =
      build_mesh_elastic_body(config.level, config.element(), config.layers);
  const Mesh& mesh = results.mesh;

  const auto [bulk, shear] = elastic_moduli(206900.0, 0.29);
  const QuadratureRule rule = quadrature_volume(mesh.elem_type);
  const int n_int = mesh.n_elements() * static_cast<int>(rule.weights.size());
  const MaterialField mat = uniform_elastic(n_int, bulk, shear);

  const AssemblyCache cache = build_assembly_cache(mesh, mat);
  results.elastic_assembly_seconds = cache.elastic_assembly_seconds;
  results.n_int = cache.n_int;

  const Vec f = external_forces(
      mesh, cache, constant_force(direction_vector(mesh.dim, 1, 1.0)),
      constant_force(direction_vector(mesh.dim, 1, 200.0)));

  NewtonResult res =
      newton_solve(cache, mat, IntegrationState::zero(cache.n_int),
                   mesh.dirichlet_values(0.5), mesh.free_mask(), f,
                   config.newton);
  res.record.step = 1;
  res.record.load = 1.0;
  res.record.derived_scalar = f.dot(res.u);
  results.u = res.u;
  results.records.push_back(std::move(res.record));
  results.displacement_snapshots.emplace_back(1, results.u);
  return results;
}

RunResults run_vm_cyclic(const BenchmarkConfig& config) {
  RunResults results;
  results.mesh =
      build_mesh_elastic_body(config.level, config.element(), config.layers);
  const Mesh& mesh = results.mesh;

  const auto [bulk, shear] = elastic_moduli(206900.0, 0.29);
  const QuadratureRule rule = quadrature_volume(mesh.elem_type);
  const int n_int = mesh.n_elements() * static_cast<int>(rule.weights.size());
  const MaterialField mat = uniform_von_mises(
      n_int, bulk, shear, 1e4, 450.0 * std::sqrt(2.0 / 3.0));

  const AssemblyCache cache = build_assembly_cache(mesh, mat);
  results.elastic_assembly_seconds = cache.elastic_assembly_seconds;
  results.n_int = cache.n_int;

  // f_max corresponds to the full traction; steps scale it by zeta(t_k).
  const Vec f_max = external_forces(
      mesh, cache, std::nullopt,
      constant_force(direction_vector(mesh.dim, 1, 200.0)));
  const Vec dirichlet = mesh.dirichlet_values(0.0);
  const BoolArray free_mask = mesh.free_mask();

  NewtonSettings settings = config.newton;
  settings.on_failure = NewtonSettings::OnFailure::error;

  IntegrationState state = IntegrationState::zero(cache.n_int);
  Vec u_prev = Vec::Zero(mesh.n_dofs());
  for (int k = 1; k <= config.n_steps; ++k) {
    const double t = 4.0 * k / config.n_steps;
    const double zeta = vm_load_scale(t);
    NewtonResult res = newton_solve(cache, mat, state, dirichlet, free_mask,
                                    Vec(zeta * f_max), settings, &u_prev);
    state = std::move(res.state);
    results.u = std::move(res.u);
    u_prev = results.u;
    res.record.step = k;
    res.record.load = zeta;
    res.record.derived_scalar = f_max.dot(results.u);  // work of traction
    results.records.push_back(std::move(res.record));

    // snapshots nearest t = 1, 2, 3, 4
    for (int j = 1; j <= 4; ++j)
      if (k == (j * config.n_steps + 2) / 4) {
        results.hardening_snapshots.push_back(
            {k, cell_mean_hardening(mesh, cache, state.Hard)});
        results.displacement_snapshots.emplace_back(k, results.u);
      }
  }
  return results;
}

RunResults run_dp_footing(const BenchmarkConfig& config) {
  RunResults results;
  results.mesh =
      build_mesh_footing(config.level, config.element(), config.layers);
  const Mesh& mesh = results.mesh;

  const auto [bulk, shear] = elastic_moduli(1e7, 0.48);
  const auto [eta, cohesion] = dp_parameters(
      450.0, M_PI / 9.0,
      mesh.dim == 3 ? DPMode::three_d : DPMode::plane_strain);
  const QuadratureRule rule = quadrature_volume(mesh.elem_type);
  const int n_int = mesh.n_elements() * static_cast<int>(rule.weights.size());
  const MaterialField mat =
      uniform_drucker_prager(n_int, bulk, shear, eta, cohesion);

  const AssemblyCache cache = build_assembly_cache(mesh, mat);
  results.elastic_assembly_seconds = cache.elastic_assembly_seconds;
  results.n_int = cache.n_int;

  const Vec f_ext = Vec::Zero(mesh.n_dofs());
  const BoolArray free_mask = mesh.free_mask();

  // Footing dofs (x2 direction) carry the load pattern; reactions there give
  // the mean pressure over the unit footing area.
  std::vector<int> footing_dofs;
  for (int n = 0; n < mesh.n_nodes(); ++n)
    if (mesh.dirichlet_load(1, n) != 0.0)
      footing_dofs.push_back(mesh.dim * n + 1);

  IntegrationState state = IntegrationState::zero(cache.n_int);
  Vec u_prev = Vec::Zero(mesh.n_dofs());
  double u_d = 0.0;
  double du = config.du0;
  double p_prev = 0.0;
  int step = 0;
  const double c0 = 450.0;

  while (u_d < config.u_max - 1e-14) {
    double increment = std::min(du, config.u_max - u_d);
    NewtonResult res;
    bool solved = false;
    while (true) {
      try {
        res = newton_solve(cache, mat, state,
                           mesh.dirichlet_values(u_d + increment), free_mask,
                           f_ext, config.newton, &u_prev);
        solved = true;
        break;
      } catch (const Error&) {
        if (config.newton.on_failure == NewtonSettings::OnFailure::error)
          throw;
        increment *= 0.5;
        if (increment < 1e-9 * config.u_max) break;  // limit load reached
      }
    }
    if (!solved) {
      results.completed = false;
      break;
    }
    u_d += increment;
    du = increment;
    state = std::move(res.state);
    results.u = std::move(res.u);
    u_prev = results.u;

    const Vec F = internal_forces(cache, state.S);
    double reaction = 0.0;
    for (int dof : footing_dofs) reaction += F(dof);
    const double pressure = -reaction;  // footing area is 1 x 1

    res.record.step = ++step;
    res.record.load = u_d;
    res.record.derived_scalar = pressure / c0;
    results.records.push_back(std::move(res.record));
    results.limit_pressure = pressure;

    if (std::abs(pressure - p_prev) <
        config.theta * std::max(std::abs(pressure), 1e-300))
      du *= 2.0;
    p_prev = pressure;
  }
  if (!results.records.empty())
    results.displacement_snapshots.emplace_back(
        results.records.back().step, results.u);
  return results;
}

}  // namespace epfem
