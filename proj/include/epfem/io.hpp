#pragma once

#include "epfem/benchmarks.hpp"

#include <optional>
#include <string>
#include <vector>

namespace epfem {

/// Named nodal or cell field; one column per node/element, 1 row for scalars
/// and dim rows for vectors.
struct VtkField {
  std::string name;
  Mat values;
};

/// Legacy ASCII unstructured-grid writer. P2/Q2 meshes use quadratic cell
/// types with their full node sets. Passing deformed_u writes COORD + u as
/// the point coordinates.
void write_vtk(const Mesh& mesh, const std::vector<VtkField>& point_fields,
               const std::vector<VtkField>& cell_fields,
               const std::string& path, const Vec* deformed_u = nullptr);

/// Header plus one row per record:
/// k,load,newton_iters,n_plastic,tangent_seconds,derived_scalar.
void write_csv_records(const std::vector<TimeStepRecord>& records,
                       const std::string& path);

void write_summary(const std::vector<std::pair<std::string, std::string>>& kv,
                   const std::string& path);

struct RunConfig {
  std::string command;  // elasticity | plasticity-vm | plasticity-dp
  int dim = 2;
  ElementFamily elem = ElementFamily::P1;
  int level = 1;
  int layers = -1;
  std::string out_dir = ".";
  std::optional<double> eps_newton;
  std::optional<int> max_iters;
  std::optional<int> n_steps;
  std::optional<double> du0;
  std::optional<double> theta;
  std::optional<double> u_max;

  std::string serialize() const;
  static RunConfig parse(const std::string& text);
  BenchmarkConfig benchmark() const;
};

/// Runs the configured benchmark and writes its outputs (VTK fields, CSV
/// records, run summary) under the output directory; the EPFEM_OUTPUT_DIR
/// environment variable overrides out_dir. Returns a process exit code.
int run_and_write(const RunConfig& config);

}  // namespace epfem
