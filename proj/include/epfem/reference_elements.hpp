#pragma once

#include "epfem/types.hpp"

#include <string>
#include <vector>

namespace epfem {

enum class ElementFamily { P1, P2, Q1, Q2 };

struct ElementType {
  ElementFamily family;
  int dim;  // 2 or 3

  friend bool operator==(const ElementType&, const ElementType&) = default;
};

std::string to_string(ElementFamily family);
ElementFamily family_from_string(const std::string& name);

/// Nodes per element for the given (family, dim) pair.
int node_count(ElementType type);

/// Quadrature points Xi (dim x n_q) and weights (n_q) on a reference cell.
struct QuadratureRule {
  Mat points;
  Vec weights;
};

/// Basis values (n_p x m) and partial derivatives w.r.t. each reference
/// coordinate, evaluated at m points.
struct ReferenceBasis {
  Mat values;
  std::vector<Mat> gradients;  // one n_p x m block per reference coordinate
};

/// Predefined volume rule: P1 centroid, P2 degree-4 (11-point tet / 3-point
/// triangle), Q1 2^dim Gauss, Q2 3^dim Gauss.
QuadratureRule quadrature_volume(ElementType type);

/// Shape functions and reference gradients at the given points (dim x m).
ReferenceBasis local_basis_volume(ElementType type, const Mat& points);

/// Rule on the reference face (triangle/quad in 3D, segment in 2D) of order
/// matching the volume rule.
QuadratureRule quadrature_face(ElementType type);

/// Basis of the face restriction of the volume shape functions; entries are
/// ordered like face_nodes(type).
ReferenceBasis local_basis_face(ElementType type, const Mat& points);

/// Reference node coordinates (dim x n_p), appendix ordering.
Mat reference_nodes(ElementType type);

/// Volume-local node indices of each face, ordered to match the face basis.
const std::vector<std::vector<int>>& face_nodes(ElementType type);

/// Measure of the reference cell (tet 1/6, triangle 1/2, hex 8, quad 4).
double reference_measure(ElementType type);

}  // namespace epfem
