#include "epfem/reference_elements.hpp"

#include <array>
#include <cmath>

namespace epfem {

namespace {

[[noreturn]] void invalid(ElementType type) {
  throw Error("invalid element type: " + to_string(type.family) + ", dim=" +
              std::to_string(type.dim));
}

void check(ElementType type) {
  if (type.dim != 2 && type.dim != 3) invalid(type);
}

// 1D Gauss rules on [-1,1].
QuadratureRule gauss_segment(int n) {
  QuadratureRule rule;
  rule.points.resize(1, n);
  rule.weights.resize(n);
  switch (n) {
    case 1:
      rule.points << 0.0;
      rule.weights << 2.0;
      break;
    case 2: {
      const double g = 1.0 / std::sqrt(3.0);
      rule.points << -g, g;
      rule.weights << 1.0, 1.0;
      break;
    }
    case 3: {
      const double g = std::sqrt(3.0 / 5.0);
      rule.points << -g, 0.0, g;
      rule.weights << 5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0;
      break;
    }
    default:
      throw Error("unsupported segment rule");
  }
  return rule;
}

QuadratureRule tensor_rule(int dim, int n_1d) {
  const QuadratureRule g = gauss_segment(n_1d);
  const int n_q = static_cast<int>(std::pow(n_1d, dim));
  QuadratureRule rule;
  rule.points.resize(dim, n_q);
  rule.weights.resize(n_q);
  for (int q = 0; q < n_q; ++q) {
    int idx = q;
    double w = 1.0;
    for (int i = 0; i < dim; ++i) {
      const int k = idx % n_1d;
      idx /= n_1d;
      rule.points(i, q) = g.points(0, k);
      w *= g.weights(k);
    }
    rule.weights(q) = w;
  }
  return rule;
}

// 11-point tetrahedron rule, exact to degree 4.
QuadratureRule tet_p2_rule() {
  const double a = 0.399403576166799;
  const double b = 0.100596423833201;
  const double f = 0.071428571428571;
  const double g = 0.785714285714286;
  const double w1 = -0.013155555555555;
  const double w2 = 0.007622222222222;
  const double w3 = 0.024888888888888;
  QuadratureRule rule;
  rule.points.resize(3, 11);
  rule.points << 0.25, f, g, f, f, a, b, b, a, a, b,
                 0.25, f, f, g, f, b, a, b, a, b, a,
                 0.25, f, f, f, g, b, b, a, b, a, a;
  rule.weights.resize(11);
  rule.weights << w1, w2, w2, w2, w2, w3, w3, w3, w3, w3, w3;
  return rule;
}

// Segment basis on [-1,1]; quadratic variant adds the midpoint node.
ReferenceBasis segment_basis(int order, const Mat& points) {
  const int m = static_cast<int>(points.cols());
  ReferenceBasis basis;
  basis.gradients.assign(1, Mat());
  if (order == 1) {
    basis.values.resize(2, m);
    basis.gradients[0].resize(2, m);
    for (int q = 0; q < m; ++q) {
      const double x = points(0, q);
      basis.values(0, q) = 0.5 * (1.0 - x);
      basis.values(1, q) = 0.5 * (1.0 + x);
      basis.gradients[0](0, q) = -0.5;
      basis.gradients[0](1, q) = 0.5;
    }
  } else {
    basis.values.resize(3, m);
    basis.gradients[0].resize(3, m);
    for (int q = 0; q < m; ++q) {
      const double x = points(0, q);
      basis.values(0, q) = 0.5 * x * (x - 1.0);
      basis.values(1, q) = 0.5 * x * (x + 1.0);
      basis.values(2, q) = 1.0 - x * x;
      basis.gradients[0](0, q) = x - 0.5;
      basis.gradients[0](1, q) = x + 0.5;
      basis.gradients[0](2, q) = -2.0 * x;
    }
  }
  return basis;
}

ReferenceBasis triangle_p1(const Mat& pts) {
  const int m = static_cast<int>(pts.cols());
  ReferenceBasis b;
  b.values.resize(3, m);
  b.gradients.assign(2, Mat(3, m));
  for (int q = 0; q < m; ++q) {
    const double x = pts(0, q), y = pts(1, q);
    b.values.col(q) << 1.0 - x - y, x, y;
    b.gradients[0].col(q) << -1, 1, 0;
    b.gradients[1].col(q) << -1, 0, 1;
  }
  return b;
}

ReferenceBasis triangle_p2(const Mat& pts) {
  const int m = static_cast<int>(pts.cols());
  ReferenceBasis b;
  b.values.resize(6, m);
  b.gradients.assign(2, Mat(6, m));
  for (int q = 0; q < m; ++q) {
    const double x = pts(0, q), y = pts(1, q);
    const double z = 1.0 - x - y;
    b.values.col(q) << z * (2 * z - 1), x * (2 * x - 1), y * (2 * y - 1),
        4 * z * x, 4 * x * y, 4 * z * y;
    b.gradients[0].col(q) << 1 - 4 * z, 4 * x - 1, 0, 4 * (z - x), 4 * y, -4 * y;
    b.gradients[1].col(q) << 1 - 4 * z, 0, 4 * y - 1, -4 * x, 4 * x, 4 * (z - y);
  }
  return b;
}

ReferenceBasis tet_p1(const Mat& pts) {
  const int m = static_cast<int>(pts.cols());
  ReferenceBasis b;
  b.values.resize(4, m);
  b.gradients.assign(3, Mat(4, m));
  for (int q = 0; q < m; ++q) {
    const double x = pts(0, q), y = pts(1, q), z = pts(2, q);
    b.values.col(q) << 1.0 - x - y - z, x, y, z;
    b.gradients[0].col(q) << -1, 1, 0, 0;
    b.gradients[1].col(q) << -1, 0, 1, 0;
    b.gradients[2].col(q) << -1, 0, 0, 1;
  }
  return b;
}

ReferenceBasis tet_p2(const Mat& pts) {
  const int m = static_cast<int>(pts.cols());
  ReferenceBasis b;
  b.values.resize(10, m);
  b.gradients.assign(3, Mat(10, m));
  for (int q = 0; q < m; ++q) {
    const double x1 = pts(0, q), x2 = pts(1, q), x3 = pts(2, q);
    const double x0 = 1.0 - x1 - x2 - x3;
    b.values.col(q) << x0 * (2 * x0 - 1), x1 * (2 * x1 - 1), x2 * (2 * x2 - 1),
        x3 * (2 * x3 - 1), 4 * x0 * x1, 4 * x1 * x2, 4 * x0 * x2, 4 * x1 * x3,
        4 * x2 * x3, 4 * x0 * x3;
    b.gradients[0].col(q) << 1 - 4 * x0, 4 * x1 - 1, 0, 0, 4 * (x0 - x1),
        4 * x2, -4 * x2, 4 * x3, 0, -4 * x3;
    b.gradients[1].col(q) << 1 - 4 * x0, 0, 4 * x2 - 1, 0, -4 * x1, 4 * x1,
        4 * (x0 - x2), 0, 4 * x3, -4 * x3;
    b.gradients[2].col(q) << 1 - 4 * x0, 0, 0, 4 * x3 - 1, -4 * x1, 0, -4 * x2,
        4 * x1, 4 * x2, 4 * (x0 - x3);
  }
  return b;
}

// Corner sign patterns shared by Q1/Q2 in 2D and 3D; Q2 edge nodes carry one
// zero coordinate.
const std::array<std::array<int, 2>, 4> kQuadCorners = {
    {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
const std::array<std::array<int, 3>, 8> kHexCorners = {
    {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
     {-1, -1, 1}, {1, -1, 1}, {1, 1, 1}, {-1, 1, 1}}};
const std::array<std::array<int, 3>, 12> kHexEdgeNodes = {
    {{0, -1, -1}, {1, 0, -1}, {0, 1, -1}, {-1, 0, -1},
     {0, -1, 1}, {1, 0, 1}, {0, 1, 1}, {-1, 0, 1},
     {-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}}};
const std::array<std::array<int, 2>, 4> kQuadEdgeNodes = {
    {{0, -1}, {1, 0}, {0, 1}, {-1, 0}}};

ReferenceBasis quad_q1(const Mat& pts) {
  const int m = static_cast<int>(pts.cols());
  ReferenceBasis b;
  b.values.resize(4, m);
  b.gradients.assign(2, Mat(4, m));
  for (int q = 0; q < m; ++q) {
    const double x = pts(0, q), y = pts(1, q);
    for (int p = 0; p < 4; ++p) {
      const double sx = kQuadCorners[p][0], sy = kQuadCorners[p][1];
      b.values(p, q) = 0.25 * (1 + sx * x) * (1 + sy * y);
      b.gradients[0](p, q) = 0.25 * sx * (1 + sy * y);
      b.gradients[1](p, q) = 0.25 * sy * (1 + sx * x);
    }
  }
  return b;
}

ReferenceBasis quad_q2(const Mat& pts) {
  const int m = static_cast<int>(pts.cols());
  ReferenceBasis b;
  b.values.resize(8, m);
  b.gradients.assign(2, Mat(8, m));
  for (int q = 0; q < m; ++q) {
    const double x = pts(0, q), y = pts(1, q);
    for (int p = 0; p < 4; ++p) {
      const double sx = kQuadCorners[p][0], sy = kQuadCorners[p][1];
      const double ax = 1 + sx * x, ay = 1 + sy * y;
      const double r = sx * x + sy * y - 1;
      b.values(p, q) = 0.25 * ax * ay * r;
      b.gradients[0](p, q) = 0.25 * sx * (ay * r + ax * ay);
      b.gradients[1](p, q) = 0.25 * sy * (ax * r + ax * ay);
    }
    for (int p = 0; p < 4; ++p) {
      const int sx = kQuadEdgeNodes[p][0], sy = kQuadEdgeNodes[p][1];
      if (sx == 0) {
        b.values(4 + p, q) = 0.5 * (1 - x * x) * (1 + sy * y);
        b.gradients[0](4 + p, q) = -x * (1 + sy * y);
        b.gradients[1](4 + p, q) = 0.5 * sy * (1 - x * x);
      } else {
        b.values(4 + p, q) = 0.5 * (1 + sx * x) * (1 - y * y);
        b.gradients[0](4 + p, q) = 0.5 * sx * (1 - y * y);
        b.gradients[1](4 + p, q) = -y * (1 + sx * x);
      }
    }
  }
  return b;
}

ReferenceBasis hex_q1(const Mat& pts) {
  const int m = static_cast<int>(pts.cols());
  ReferenceBasis b;
  b.values.resize(8, m);
  b.gradients.assign(3, Mat(8, m));
  for (int q = 0; q < m; ++q) {
    const double x = pts(0, q), y = pts(1, q), z = pts(2, q);
    for (int p = 0; p < 8; ++p) {
      const double sx = kHexCorners[p][0], sy = kHexCorners[p][1],
                   sz = kHexCorners[p][2];
      const double ax = 1 + sx * x, ay = 1 + sy * y, az = 1 + sz * z;
      b.values(p, q) = 0.125 * ax * ay * az;
      b.gradients[0](p, q) = 0.125 * sx * ay * az;
      b.gradients[1](p, q) = 0.125 * sy * ax * az;
      b.gradients[2](p, q) = 0.125 * sz * ax * ay;
    }
  }
  return b;
}

ReferenceBasis hex_q2(const Mat& pts) {
  const int m = static_cast<int>(pts.cols());
  ReferenceBasis b;
  b.values.resize(20, m);
  b.gradients.assign(3, Mat(20, m));
  for (int q = 0; q < m; ++q) {
    const double x = pts(0, q), y = pts(1, q), z = pts(2, q);
    for (int p = 0; p < 8; ++p) {
      const double sx = kHexCorners[p][0], sy = kHexCorners[p][1],
                   sz = kHexCorners[p][2];
      const double ax = 1 + sx * x, ay = 1 + sy * y, az = 1 + sz * z;
      const double r = sx * x + sy * y + sz * z - 2;
      b.values(p, q) = 0.125 * ax * ay * az * r;
      b.gradients[0](p, q) = 0.125 * sx * ay * az * (r + ax);
      b.gradients[1](p, q) = 0.125 * sy * ax * az * (r + ay);
      b.gradients[2](p, q) = 0.125 * sz * ax * ay * (r + az);
    }
    for (int p = 0; p < 12; ++p) {
      const int sx = kHexEdgeNodes[p][0], sy = kHexEdgeNodes[p][1],
                sz = kHexEdgeNodes[p][2];
      double v[3], d[3];
      const double c[3] = {x, y, z};
      const int s[3] = {sx, sy, sz};
      for (int i = 0; i < 3; ++i) {
        if (s[i] == 0) {
          v[i] = 1 - c[i] * c[i];
          d[i] = -2 * c[i];
        } else {
          v[i] = 1 + s[i] * c[i];
          d[i] = s[i];
        }
      }
      b.values(8 + p, q) = 0.25 * v[0] * v[1] * v[2];
      b.gradients[0](8 + p, q) = 0.25 * d[0] * v[1] * v[2];
      b.gradients[1](8 + p, q) = 0.25 * v[0] * d[1] * v[2];
      b.gradients[2](8 + p, q) = 0.25 * v[0] * v[1] * d[2];
    }
  }
  return b;
}

}  // namespace

std::string to_string(ElementFamily family) {
  switch (family) {
    case ElementFamily::P1: return "P1";
    case ElementFamily::P2: return "P2";
    case ElementFamily::Q1: return "Q1";
    case ElementFamily::Q2: return "Q2";
  }
  return "?";
}

ElementFamily family_from_string(const std::string& name) {
  if (name == "P1") return ElementFamily::P1;
  if (name == "P2") return ElementFamily::P2;
  if (name == "Q1") return ElementFamily::Q1;
  if (name == "Q2") return ElementFamily::Q2;
  throw Error("unknown element family: " + name);
}

int node_count(ElementType type) {
  check(type);
  switch (type.family) {
    case ElementFamily::P1: return type.dim == 3 ? 4 : 3;
    case ElementFamily::P2: return type.dim == 3 ? 10 : 6;
    case ElementFamily::Q1: return type.dim == 3 ? 8 : 4;
    case ElementFamily::Q2: return type.dim == 3 ? 20 : 8;
  }
  invalid(type);
}

double reference_measure(ElementType type) {
  check(type);
  const bool simplex =
      type.family == ElementFamily::P1 || type.family == ElementFamily::P2;
  if (type.dim == 3) return simplex ? 1.0 / 6.0 : 8.0;
  return simplex ? 0.5 : 4.0;
}

QuadratureRule quadrature_volume(ElementType type) {
  check(type);
  switch (type.family) {
    case ElementFamily::P1: {
      QuadratureRule rule;
      if (type.dim == 3) {
        rule.points = Mat::Constant(3, 1, 0.25);
        rule.weights = Vec::Constant(1, 1.0 / 6.0);
      } else {
        rule.points = Mat::Constant(2, 1, 1.0 / 3.0);
        rule.weights = Vec::Constant(1, 0.5);
      }
      return rule;
    }
    case ElementFamily::P2: {
      if (type.dim == 3) return tet_p2_rule();
      QuadratureRule rule;  // edge midpoints, exact to degree 2
      rule.points.resize(2, 3);
      rule.points << 0.5, 0.5, 0.0,
                     0.0, 0.5, 0.5;
      rule.weights = Vec::Constant(3, 1.0 / 6.0);
      return rule;
    }
    case ElementFamily::Q1:
      return tensor_rule(type.dim, 2);
    case ElementFamily::Q2:
      return tensor_rule(type.dim, 3);
  }
  invalid(type);
}

ReferenceBasis local_basis_volume(ElementType type, const Mat& points) {
  check(type);
  if (points.rows() != type.dim) throw Error("point dimension mismatch");
  switch (type.family) {
    case ElementFamily::P1:
      return type.dim == 3 ? tet_p1(points) : triangle_p1(points);
    case ElementFamily::P2:
      return type.dim == 3 ? tet_p2(points) : triangle_p2(points);
    case ElementFamily::Q1:
      return type.dim == 3 ? hex_q1(points) : quad_q1(points);
    case ElementFamily::Q2:
      return type.dim == 3 ? hex_q2(points) : quad_q2(points);
  }
  invalid(type);
}

QuadratureRule quadrature_face(ElementType type) {
  check(type);
  if (type.dim == 3)
    return quadrature_volume(ElementType{type.family, 2});
  switch (type.family) {
    case ElementFamily::P1: return gauss_segment(1);
    case ElementFamily::P2: return gauss_segment(2);
    case ElementFamily::Q1: return gauss_segment(2);
    case ElementFamily::Q2: return gauss_segment(3);
  }
  invalid(type);
}

ReferenceBasis local_basis_face(ElementType type, const Mat& points) {
  check(type);
  if (type.dim == 3)
    return local_basis_volume(ElementType{type.family, 2}, points);
  const bool quadratic =
      type.family == ElementFamily::P2 || type.family == ElementFamily::Q2;
  return segment_basis(quadratic ? 2 : 1, points);
}

Mat reference_nodes(ElementType type) {
  check(type);
  const int n_p = node_count(type);
  Mat nodes(type.dim, n_p);
  switch (type.family) {
    case ElementFamily::P1:
      if (type.dim == 3)
        nodes << 0, 1, 0, 0,
                 0, 0, 1, 0,
                 0, 0, 0, 1;
      else
        nodes << 0, 1, 0,
                 0, 0, 1;
      break;
    case ElementFamily::P2:
      if (type.dim == 3)
        nodes << 0, 1, 0, 0, 0.5, 0.5, 0.0, 0.5, 0.0, 0.0,
                 0, 0, 1, 0, 0.0, 0.5, 0.5, 0.0, 0.5, 0.0,
                 0, 0, 0, 1, 0.0, 0.0, 0.0, 0.5, 0.5, 0.5;
      else
        nodes << 0, 1, 0, 0.5, 0.5, 0.0,
                 0, 0, 1, 0.0, 0.5, 0.5;
      break;
    case ElementFamily::Q1:
      if (type.dim == 3) {
        for (int p = 0; p < 8; ++p)
          nodes.col(p) << kHexCorners[p][0], kHexCorners[p][1],
              kHexCorners[p][2];
      } else {
        for (int p = 0; p < 4; ++p)
          nodes.col(p) << kQuadCorners[p][0], kQuadCorners[p][1];
      }
      break;
    case ElementFamily::Q2:
      if (type.dim == 3) {
        for (int p = 0; p < 8; ++p)
          nodes.col(p) << kHexCorners[p][0], kHexCorners[p][1],
              kHexCorners[p][2];
        for (int p = 0; p < 12; ++p)
          nodes.col(8 + p) << kHexEdgeNodes[p][0], kHexEdgeNodes[p][1],
              kHexEdgeNodes[p][2];
      } else {
        for (int p = 0; p < 4; ++p)
          nodes.col(p) << kQuadCorners[p][0], kQuadCorners[p][1];
        for (int p = 0; p < 4; ++p)
          nodes.col(4 + p) << kQuadEdgeNodes[p][0], kQuadEdgeNodes[p][1];
      }
      break;
  }
  return nodes;
}

const std::vector<std::vector<int>>& face_nodes(ElementType type) {
  check(type);
  static const std::vector<std::vector<int>> tri_p1 = {{0, 1}, {1, 2}, {2, 0}};
  static const std::vector<std::vector<int>> tri_p2 = {
      {0, 1, 3}, {1, 2, 4}, {2, 0, 5}};
  static const std::vector<std::vector<int>> quad_q1 = {
      {0, 1}, {1, 2}, {2, 3}, {3, 0}};
  static const std::vector<std::vector<int>> quad_q2 = {
      {0, 1, 4}, {1, 2, 5}, {2, 3, 6}, {3, 0, 7}};
  static const std::vector<std::vector<int>> tet_p1 = {
      {0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  static const std::vector<std::vector<int>> tet_p2 = {
      {0, 2, 1, 6, 5, 4}, {0, 1, 3, 4, 7, 9},
      {1, 2, 3, 5, 8, 7}, {0, 3, 2, 9, 8, 6}};
  static const std::vector<std::vector<int>> hex_q1 = {
      {0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 5, 4},
      {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  static const std::vector<std::vector<int>> hex_q2 = {
      {0, 1, 2, 3, 8, 9, 10, 11},   {4, 5, 6, 7, 12, 13, 14, 15},
      {0, 1, 5, 4, 8, 17, 12, 16},  {1, 2, 6, 5, 9, 18, 13, 17},
      {2, 3, 7, 6, 10, 19, 14, 18}, {3, 0, 4, 7, 11, 16, 15, 19}};
  switch (type.family) {
    case ElementFamily::P1: return type.dim == 3 ? tet_p1 : tri_p1;
    case ElementFamily::P2: return type.dim == 3 ? tet_p2 : tri_p2;
    case ElementFamily::Q1: return type.dim == 3 ? hex_q1 : quad_q1;
    case ElementFamily::Q2: return type.dim == 3 ? hex_q2 : quad_q2;
  }
  invalid(type);
}

}  // namespace epfem
