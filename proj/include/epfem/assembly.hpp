#pragma once

#include "epfem/constitutive.hpp"
#include "epfem/linalg.hpp"
#include "epfem/mesh.hpp"

#include <functional>
#include <optional>

namespace epfem {

/// Per-integration-point Jacobian data: determinants (n_int) and inverse
/// Jacobians stored column-major ((dim*dim) x n_int).
struct JacobianData {
  Vec det;
  Mat inv;
};

/// det J and J^-1 at every integration point; throws on det <= 0.
JacobianData jacobians(const Mesh& mesh, const ReferenceBasis& basis,
                       const QuadratureRule& rule);

/// Global strain-displacement matrix: 6 n_int x 3 n_n in 3D, 3 n_int x 2 n_n
/// in 2D (rows e11, e22, 2 e12).
SpMat strain_displacement_matrix(const Mesh& mesh, const ReferenceBasis& basis,
                                 const QuadratureRule& rule,
                                 const JacobianData& jac);

/// Block diagonal matrix with WEIGHT[q] * DS[:,q] blocks; in 2D only the
/// plane-strain rows/columns {0, 1, 3} of each 6x6 block are used.
SpMat block_diag_D(const Mat& DS, const Vec& weight, int dim);

/// Fixed per-mesh data: quadrature, B, weights, elastic block-diagonal and
/// stiffness. D_tangent updates reuse everything here.
struct AssemblyCache {
  int dim = 0;
  int n_strain = 0;  // strain components carried by B (3 in 2D, 6 in 3D)
  int n_int = 0;
  QuadratureRule rule;
  ReferenceBasis basis;
  JacobianData jac;
  Vec weight;  // |det J| * quadrature weight
  SpMat B;
  SpMat D_elast;
  SpMat K_elast;
  Vec shear, bulk;  // moduli snapshot for tangent differences
  double elastic_assembly_seconds = 0.0;

  /// Strains at integration points (6 x n_int, plane-strain embedded in 2D).
  Mat strains(const Vec& u) const;
};

AssemblyCache build_assembly_cache(const Mesh& mesh, const MaterialField& mat);

SpMat assemble_elastic_stiffness(const AssemblyCache& cache);

/// K_elast + B' (D_tangent - D_elast) B; the difference carries blocks only
/// at columns flagged plastic.
SpMat assemble_tangent_stiffness(const AssemblyCache& cache, const Mat& DS,
                                 const BoolArray& plastic_cols);

/// F = B' (S scaled columnwise by WEIGHT).
Vec internal_forces(const AssemblyCache& cache, const Mat& S);

using ForceField = std::function<Vec(const Vec& x)>;

/// Constant-vector convenience wrapper.
ForceField constant_force(const Vec& value);

/// Volume quadrature of f_V . phi plus face quadrature of f_t . phi over the
/// Neumann faces. Passing a traction with no Neumann faces is an error.
Vec external_forces(const Mesh& mesh, const AssemblyCache& cache,
                    const std::optional<ForceField>& volume_force,
                    const std::optional<ForceField>& traction);

}  // namespace epfem
