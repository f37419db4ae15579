#pragma once

#include "epfem/reference_elements.hpp"
#include "epfem/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace epfem {

/// Conforming structured mesh with Dirichlet masks and Neumann face lists.
/// Dirichlet data is split into a fixed part and a unit load pattern that the
/// time-stepping drivers scale.
struct Mesh {
  int dim = 2;
  ElementType elem_type{ElementFamily::P1, 2};
  Mat coord;                 // dim x n_n
  Eigen::MatrixXi elem;      // n_p x n_e, 0-based node ids
  BoolMat free_dof;          // dim x n_n, true = unknown
  Mat dirichlet_fixed;       // dim x n_n
  Mat dirichlet_load;        // dim x n_n, scaled by the load factor
  std::vector<std::pair<int, int>> neumann_faces;  // (element, local face)

  int n_nodes() const { return static_cast<int>(coord.cols()); }
  int n_elements() const { return static_cast<int>(elem.cols()); }
  int n_dofs() const { return dim * n_nodes(); }

  /// Flattened dof mask (node-major, direction-minor).
  BoolArray free_mask() const;

  /// Prescribed displacement vector for the given load scale; zero on free
  /// dofs.
  Vec dirichlet_values(double load_scale) const;
};

/// L-shaped body (10x10 square minus the 5x5 bottom-left block), extruded to
/// thickness 1 in 3D. Symmetry conditions on the left and bottom segments, a
/// unit u1 load pattern on the bottom, traction faces on top. Base density is
/// 5 cells per block side, doubled per level; layer count tracks the in-plane
/// cell size unless overridden.
Mesh build_mesh_elastic_body(int level, ElementType elem_type, int layers = -1);

/// 10x10 footing domain: zero normal displacement on left/right/bottom, rigid
/// rough footing of width 1 on the top-left driven by a unit u2 = -1 load
/// pattern. P1/Q1 base density 10x10 cells, P2/Q2 5x5, doubled per level
/// (level 5 reproduces the 320x320 / 160x160 reference density).
Mesh build_mesh_footing(int level, ElementType elem_type, int layers = -1);

/// Faces of the mesh that belong to exactly one element.
std::vector<std::pair<int, int>> boundary_faces(const Mesh& mesh);

/// Sorted ids of nodes lying on some boundary face.
std::vector<int> boundary_nodes(const Mesh& mesh);

/// Plain-text export/import: node, element and constrained-dof tables.
void write_mesh_text(const Mesh& mesh, const std::string& path);
Mesh read_mesh_text(const std::string& path);

}  // namespace epfem
