#include "epfem/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace epfem {

namespace {

int vtk_cell_type(ElementType type) {
  switch (type.family) {
    case ElementFamily::P1: return type.dim == 3 ? 10 : 5;
    case ElementFamily::P2: return type.dim == 3 ? 24 : 22;
    case ElementFamily::Q1: return type.dim == 3 ? 12 : 9;
    case ElementFamily::Q2: return type.dim == 3 ? 25 : 23;
  }
  throw Error("vtk_cell_type: invalid element");
}

// VTK quadratic tets expect edge midpoints in the order
// (01),(12),(02),(03),(13),(23).
const std::vector<int>& vtk_node_order(ElementType type) {
  static const std::vector<int> tet10 = {0, 1, 2, 3, 4, 5, 6, 9, 7, 8};
  static const std::vector<int> identity20 = [] {
    std::vector<int> v(20);
    for (int i = 0; i < 20; ++i) v[i] = i;
    return v;
  }();
  if (type.family == ElementFamily::P2 && type.dim == 3) return tet10;
  static const std::vector<int> small = {0, 1, 2, 3, 4, 5, 6, 7};
  if (node_count(type) <= 8) return small;
  return identity20;
}

void write_field_block(std::ofstream& out, const VtkField& field, int dim) {
  if (field.values.rows() == 1) {
    out << "SCALARS " << field.name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (Eigen::Index j = 0; j < field.values.cols(); ++j)
      out << field.values(0, j) << "\n";
  } else {
    out << "VECTORS " << field.name << " double\n";
    for (Eigen::Index j = 0; j < field.values.cols(); ++j) {
      for (int i = 0; i < 3; ++i)
        out << (i < dim && i < field.values.rows() ? field.values(i, j) : 0.0)
            << (i < 2 ? " " : "\n");
    }
  }
}

}  // namespace

void write_vtk(const Mesh& mesh, const std::vector<VtkField>& point_fields,
               const std::vector<VtkField>& cell_fields,
               const std::string& path, const Vec* deformed_u) {
  for (const auto& field : point_fields)
    if (field.values.cols() != mesh.n_nodes())
      throw Error("write_vtk: point field '" + field.name +
                  "' length mismatch");
  for (const auto& field : cell_fields)
    if (field.values.cols() != mesh.n_elements())
      throw Error("write_vtk: cell field '" + field.name +
                  "' length mismatch");
  if (deformed_u && deformed_u->size() != mesh.n_dofs())
    throw Error("write_vtk: deformed displacement length mismatch");

  std::ofstream out(path);
  if (!out) throw Error("write_vtk: cannot open " + path);
  out.precision(12);
  out << "# vtk DataFile Version 3.0\n";
  out << "epfem output\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_nodes() << " double\n";
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    for (int i = 0; i < 3; ++i) {
      double x = i < mesh.dim ? mesh.coord(i, n) : 0.0;
      if (deformed_u && i < mesh.dim) x += (*deformed_u)(mesh.dim * n + i);
      out << x << (i < 2 ? " " : "\n");
    }
  }
  const int n_p = static_cast<int>(mesh.elem.rows());
  const auto& order = vtk_node_order(mesh.elem_type);
  out << "CELLS " << mesh.n_elements() << " "
      << static_cast<long long>(mesh.n_elements()) * (n_p + 1) << "\n";
  for (int e = 0; e < mesh.n_elements(); ++e) {
    out << n_p;
    for (int p = 0; p < n_p; ++p) out << " " << mesh.elem(order[p], e);
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.n_elements() << "\n";
  const int cell_type = vtk_cell_type(mesh.elem_type);
  for (int e = 0; e < mesh.n_elements(); ++e) out << cell_type << "\n";

  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.n_nodes() << "\n";
    for (const auto& field : point_fields)
      write_field_block(out, field, mesh.dim);
  }
  if (!cell_fields.empty()) {
    out << "CELL_DATA " << mesh.n_elements() << "\n";
    for (const auto& field : cell_fields)
      write_field_block(out, field, mesh.dim);
  }
}

void write_csv_records(const std::vector<TimeStepRecord>& records,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_csv_records: cannot open " + path);
  out.precision(17);
  out << "k,load,newton_iters,n_plastic,tangent_seconds,derived_scalar\n";
  for (const auto& r : records)
    out << r.step << "," << r.load << "," << r.newton_iters << ","
        << r.n_plastic << "," << r.tangent_seconds << "," << r.derived_scalar
        << "\n";
}

void write_summary(const std::vector<std::pair<std::string, std::string>>& kv,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_summary: cannot open " + path);
  for (const auto& [key, value] : kv) out << key << "=" << value << "\n";
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << "command=" << command << "\n";
  out << "dim=" << dim << "\n";
  out << "elem=" << to_string(elem) << "\n";
  out << "level=" << level << "\n";
  out << "layers=" << layers << "\n";
  out << "out_dir=" << out_dir << "\n";
  if (eps_newton) out << "eps_newton=" << *eps_newton << "\n";
  if (max_iters) out << "max_iters=" << *max_iters << "\n";
  if (n_steps) out << "n_steps=" << *n_steps << "\n";
  if (du0) out << "du0=" << *du0 << "\n";
  if (theta) out << "theta=" << *theta << "\n";
  if (u_max) out << "u_max=" << *u_max << "\n";
  return out.str();
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto pos = line.find('=');
    if (pos == std::string::npos)
      throw Error("RunConfig::parse: malformed line '" + line + "'");
    const std::string key = line.substr(0, pos);
    const std::string value = line.substr(pos + 1);
    if (key == "command") config.command = value;
    else if (key == "dim") config.dim = std::stoi(value);
    else if (key == "elem") config.elem = family_from_string(value);
    else if (key == "level") config.level = std::stoi(value);
    else if (key == "layers") config.layers = std::stoi(value);
    else if (key == "out_dir") config.out_dir = value;
    else if (key == "eps_newton") config.eps_newton = std::stod(value);
    else if (key == "max_iters") config.max_iters = std::stoi(value);
    else if (key == "n_steps") config.n_steps = std::stoi(value);
    else if (key == "du0") config.du0 = std::stod(value);
    else if (key == "theta") config.theta = std::stod(value);
    else if (key == "u_max") config.u_max = std::stod(value);
    else throw Error("RunConfig::parse: unknown key '" + key + "'");
  }
  return config;
}

BenchmarkConfig RunConfig::benchmark() const {
  BenchmarkConfig bench;
  bench.dim = dim;
  bench.elem = elem;
  bench.level = level;
  bench.layers = layers;
  if (eps_newton) bench.newton.eps_newton = *eps_newton;
  if (max_iters) bench.newton.max_iters = *max_iters;
  if (n_steps) bench.n_steps = *n_steps;
  if (du0) bench.du0 = *du0;
  if (theta) bench.theta = *theta;
  if (u_max) bench.u_max = *u_max;
  return bench;
}

namespace {

Mat displacement_field(const Mesh& mesh, const Vec& u) {
  return Eigen::Map<const Mat>(u.data(), mesh.dim, mesh.n_nodes());
}

Mat magnitude_field(const Mesh& mesh, const Vec& u, double clamp = -1.0) {
  Mat field(1, mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    double mag = u.segment(mesh.dim * n, mesh.dim).norm();
    if (clamp > 0.0 && mag > clamp) mag = clamp;
    field(0, n) = mag;
  }
  return field;
}

std::vector<std::pair<std::string, std::string>> base_summary(
    const RunConfig& config, const RunResults& results) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::istringstream in(config.serialize());
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find('=');
    kv.emplace_back(line.substr(0, pos), line.substr(pos + 1));
  }
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  kv.emplace_back("n_nodes", std::to_string(results.mesh.n_nodes()));
  kv.emplace_back("n_elements", std::to_string(results.mesh.n_elements()));
  kv.emplace_back("n_dofs", std::to_string(results.mesh.n_dofs()));
  kv.emplace_back("n_int", std::to_string(results.n_int));
  kv.emplace_back("n_steps_run", std::to_string(results.records.size()));
  kv.emplace_back("elastic_assembly_seconds",
                  num(results.elastic_assembly_seconds));
  if (!results.records.empty()) {
    kv.emplace_back("final_load", num(results.records.back().load));
    kv.emplace_back("final_derived_scalar",
                    num(results.records.back().derived_scalar));
  }
  return kv;
}

}  // namespace

int run_and_write(const RunConfig& config_in) {
  RunConfig config = config_in;
  if (const char* env = std::getenv("EPFEM_OUTPUT_DIR"))
    config.out_dir = env;
  std::filesystem::create_directories(config.out_dir);
  const auto out = [&](const std::string& name) {
    return (std::filesystem::path(config.out_dir) / name).string();
  };

  if (config.command == "elasticity") {
    const RunResults results = run_elastic(config.benchmark());
    write_vtk(results.mesh,
              {{"displacement", displacement_field(results.mesh, results.u)},
               {"total_displacement",
                magnitude_field(results.mesh, results.u)}},
              {}, out("displacement.vtk"));
    write_vtk(results.mesh,
              {{"displacement", displacement_field(results.mesh, results.u)}},
              {}, out("displacement_deformed.vtk"), &results.u);
    write_summary(base_summary(config, results), out("summary.txt"));
    return 0;
  }
  if (config.command == "plasticity-vm") {
    const RunResults results = run_vm_cyclic(config.benchmark());
    write_csv_records(results.records, out("hysteresis.csv"));
    for (std::size_t i = 0; i < results.hardening_snapshots.size(); ++i) {
      const auto& snap = results.hardening_snapshots[i];
      const Vec& u_snap = results.displacement_snapshots[i].second;
      write_vtk(results.mesh,
                {{"displacement", displacement_field(results.mesh, u_snap)}},
                {{"hardening_norm", snap.values.transpose()}},
                out("hardening_step_" + std::to_string(snap.step) + ".vtk"));
    }
    write_summary(base_summary(config, results), out("summary.txt"));
    return 0;
  }
  if (config.command == "plasticity-dp") {
    const RunResults results = run_dp_footing(config.benchmark());
    write_csv_records(results.records, out("loadpath.csv"));
    write_vtk(results.mesh,
              {{"displacement", displacement_field(results.mesh, results.u)},
               {"total_displacement",
                magnitude_field(results.mesh, results.u)},
               {"total_displacement_clamped",
                magnitude_field(results.mesh, results.u, 0.01)}},
              {}, out("displacement.vtk"));
    auto kv = base_summary(config, results);
    std::ostringstream lim;
    lim.precision(17);
    lim << results.limit_pressure;
    kv.emplace_back("limit_pressure", lim.str());
    kv.emplace_back("completed", results.completed ? "1" : "0");
    write_summary(kv, out("summary.txt"));
    return 0;
  }
  std::cerr << "unknown command: " << config.command << "\n";
  return 2;
}

}  // namespace epfem
