#include "epfem/io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common_options(CLI::App* cmd, epfem::RunConfig& config) {
  cmd->add_option("--dim", config.dim, "Spatial dimension")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--elem",
         [&config](const std::string& name) {
           config.elem = epfem::family_from_string(name);
         },
         "Element family (P1, P2, Q1, Q2)")
      ->check(CLI::IsMember({"P1", "P2", "Q1", "Q2"}))
      ->default_str("P1");
  cmd->add_option("--level", config.level, "Mesh refinement level")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--layers", config.layers,
                  "3D extrusion layers (-1 tracks in-plane density)")
      ->capture_default_str();
  cmd->add_option("--out", config.out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_option_function<double>(
      "--eps-newton",
      [&config](double v) { config.eps_newton = v; },
      "Newton stopping tolerance");
  cmd->add_option_function<int>(
      "--max-iters", [&config](int v) { config.max_iters = v; },
      "Newton iteration budget");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D/3D elastoplastic finite element benchmarks"};
  app.require_subcommand(1);

  epfem::RunConfig config;

  CLI::App* elasticity =
      app.add_subcommand("elasticity", "One-shot elastic benchmark");
  add_common_options(elasticity, config);

  CLI::App* vm = app.add_subcommand(
      "plasticity-vm", "Cyclic von Mises benchmark with kinematic hardening");
  add_common_options(vm, config);
  vm->add_option_function<int>(
      "--steps", [&config](int v) { config.n_steps = v; },
      "Number of uniform time steps");

  CLI::App* dp = app.add_subcommand(
      "plasticity-dp", "Drucker-Prager strip-footing benchmark");
  add_common_options(dp, config);
  dp->add_option_function<double>(
      "--du0", [&config](double v) { config.du0 = v; },
      "Initial footing displacement increment");
  dp->add_option_function<double>(
      "--theta", [&config](double v) { config.theta = v; },
      "Relative pressure increment triggering step doubling");
  dp->add_option_function<double>(
      "--umax", [&config](double v) { config.u_max = v; },
      "Final footing displacement");

  CLI11_PARSE(app, argc, argv);

  if (elasticity->parsed()) config.command = "elasticity";
  if (vm->parsed()) config.command = "plasticity-vm";
  if (dp->parsed()) config.command = "plasticity-dp";

  try {
    return epfem::run_and_write(config);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
