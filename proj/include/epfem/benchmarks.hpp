#pragma once

#include "epfem/solver.hpp"

namespace epfem {

struct BenchmarkConfig {
  int dim = 2;
  ElementFamily elem = ElementFamily::P1;
  int level = 1;
  int layers = -1;  // 3D extrusion override; -1 tracks the in-plane density
  NewtonSettings newton;
  int n_steps = 40;    // cyclic traction steps
  double du0 = 1e-3;   // initial footing increment
  double u_max = 1.0;  // footing displacement bound
  double theta = 1e-3;  // relative pressure increment triggering doubling

  ElementType element() const { return ElementType{elem, dim}; }
};

struct CellFieldSnapshot {
  int step = 0;
  Vec values;  // one value per element
};

struct RunResults {
  Mesh mesh;
  std::vector<TimeStepRecord> records;
  Vec u;  // final displacement
  std::vector<std::pair<int, Vec>> displacement_snapshots;
  std::vector<CellFieldSnapshot> hardening_snapshots;  // mean |beta| per cell
  double elastic_assembly_seconds = 0.0;
  int n_int = 0;
  double limit_pressure = 0.0;  // last converged footing pressure
  bool completed = true;  // false when the footing run hit a solver failure
};

/// One-shot elastic solve: E = 206900, nu = 0.29, traction 200 on top, unit
/// volume force in x2, u_D = 0.5 on the bottom segment.
RunResults run_elastic(const BenchmarkConfig& config);

/// Cyclic traction with the von Mises model (a = 1e4, Y = 450 sqrt(2/3));
/// traction scale ramps 0 -> 1 -> -1 -> 0 over t in [0, 4].
RunResults run_vm_cyclic(const BenchmarkConfig& config);

/// Displacement-driven strip footing with the Drucker-Prager model
/// (E = 1e7, nu = 0.48, c0 = 450, phi = pi/9); adaptive increment doubling,
/// records the normalized pressure path.
RunResults run_dp_footing(const BenchmarkConfig& config);

/// Traction scale of the cyclic test: 0 -> 1 on [0,1], 1 -> -1 on [1,3],
/// -1 -> 0 on [3,4].
double vm_load_scale(double t);

}  // namespace epfem
