#include "epfem/assembly.hpp"

#include <chrono>
#include <cmath>

namespace epfem {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Plane-strain rows of the full Voigt blocks used by 2D assembly.
constexpr int kPlaneRows[3] = {0, 1, 3};

}  // namespace

JacobianData jacobians(const Mesh& mesh, const ReferenceBasis& basis,
                       const QuadratureRule& rule) {
  const int dim = mesh.dim;
  const int n_p = static_cast<int>(basis.values.rows());
  const int n_q = static_cast<int>(rule.weights.size());
  const int n_int = mesh.n_elements() * n_q;

  JacobianData jac;
  jac.det.resize(n_int);
  jac.inv.resize(dim * dim, n_int);

  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int q = 0; q < n_q; ++q) {
      J.setZero();
      for (int p = 0; p < n_p; ++p) {
        const auto node = mesh.coord.col(mesh.elem(p, e));
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            J(i, j) += basis.gradients[i](p, q) * node(j);
      }
      const int m = e * n_q + q;
      if (dim == 3) {
        const double det = J.determinant();
        if (det <= 0.0)
          throw Error("jacobians: nonpositive det J in element " +
                      std::to_string(e));
        jac.det(m) = det;
        Eigen::Map<Eigen::Matrix3d>(jac.inv.col(m).data()) = J.inverse();
      } else {
        const Eigen::Matrix2d J2 = J.topLeftCorner<2, 2>();
        const double det = J2.determinant();
        if (det <= 0.0)
          throw Error("jacobians: nonpositive det J in element " +
                      std::to_string(e));
        jac.det(m) = det;
        Eigen::Map<Eigen::Matrix2d>(jac.inv.col(m).data()) = J2.inverse();
      }
    }
  }
  return jac;
}

SpMat strain_displacement_matrix(const Mesh& mesh, const ReferenceBasis& basis,
                                 const QuadratureRule& rule,
                                 const JacobianData& jac) {
  const int dim = mesh.dim;
  const int n_strain = dim == 3 ? 6 : 3;
  const int n_p = static_cast<int>(basis.values.rows());
  const int n_q = static_cast<int>(rule.weights.size());
  const int n_int = mesh.n_elements() * n_q;

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(n_int) * n_p * 3 * dim);
  Vec dphi(3);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int q = 0; q < n_q; ++q) {
      const int m = e * n_q + q;
      const int row0 = n_strain * m;
      Eigen::Map<const Mat> Jinv(jac.inv.col(m).data(), dim, dim);
      for (int p = 0; p < n_p; ++p) {
        dphi.setZero();
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            dphi(i) += Jinv(i, j) * basis.gradients[j](p, q);
        const int col0 = dim * mesh.elem(p, e);
        if (dim == 3) {
          triplets.emplace_back(row0 + 0, col0 + 0, dphi(0));
          triplets.emplace_back(row0 + 1, col0 + 1, dphi(1));
          triplets.emplace_back(row0 + 2, col0 + 2, dphi(2));
          triplets.emplace_back(row0 + 3, col0 + 0, dphi(1));
          triplets.emplace_back(row0 + 3, col0 + 1, dphi(0));
          triplets.emplace_back(row0 + 4, col0 + 1, dphi(2));
          triplets.emplace_back(row0 + 4, col0 + 2, dphi(1));
          triplets.emplace_back(row0 + 5, col0 + 0, dphi(2));
          triplets.emplace_back(row0 + 5, col0 + 2, dphi(0));
        } else {
          triplets.emplace_back(row0 + 0, col0 + 0, dphi(0));
          triplets.emplace_back(row0 + 1, col0 + 1, dphi(1));
          triplets.emplace_back(row0 + 2, col0 + 0, dphi(1));
          triplets.emplace_back(row0 + 2, col0 + 1, dphi(0));
        }
      }
    }
  }
  SpMat B(static_cast<Eigen::Index>(n_strain) * n_int, mesh.n_dofs());
  B.setFromTriplets(triplets.begin(), triplets.end());
  B.makeCompressed();
  return B;
}

SpMat block_diag_D(const Mat& DS, const Vec& weight, int dim) {
  const int n_int = static_cast<int>(weight.size());
  if (DS.cols() != n_int || DS.rows() != 36)
    throw Error("block_diag_D: DS must be 36 x n_int");
  const int n_strain = dim == 3 ? 6 : 3;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(n_int) * n_strain * n_strain);
  for (int q = 0; q < n_int; ++q) {
    Eigen::Map<const Mat6> block(DS.col(q).data());
    const int base = n_strain * q;
    for (int i = 0; i < n_strain; ++i)
      for (int j = 0; j < n_strain; ++j) {
        const double v = dim == 3 ? block(i, j)
                                  : block(kPlaneRows[i], kPlaneRows[j]);
        triplets.emplace_back(base + i, base + j, weight(q) * v);
      }
  }
  SpMat D(static_cast<Eigen::Index>(n_strain) * n_int,
          static_cast<Eigen::Index>(n_strain) * n_int);
  D.setFromTriplets(triplets.begin(), triplets.end());
  D.makeCompressed();
  return D;
}

Mat AssemblyCache::strains(const Vec& u) const {
  const Vec e_flat = B * u;
  Mat E = Mat::Zero(6, n_int);
  if (dim == 3) {
    E = Eigen::Map<const Mat>(e_flat.data(), 6, n_int);
  } else {
    for (int q = 0; q < n_int; ++q)
      for (int i = 0; i < 3; ++i)
        E(kPlaneRows[i], q) = e_flat(3 * q + i);
  }
  return E;
}

AssemblyCache build_assembly_cache(const Mesh& mesh, const MaterialField& mat) {
  const auto t0 = std::chrono::steady_clock::now();
  AssemblyCache cache;
  cache.dim = mesh.dim;
  cache.n_strain = mesh.dim == 3 ? 6 : 3;
  cache.rule = quadrature_volume(mesh.elem_type);
  cache.basis = local_basis_volume(mesh.elem_type, cache.rule.points);
  cache.jac = jacobians(mesh, cache.basis, cache.rule);
  const int n_q = static_cast<int>(cache.rule.weights.size());
  cache.n_int = mesh.n_elements() * n_q;
  if (mat.n_int() != cache.n_int)
    throw Error("build_assembly_cache: material field size mismatch");

  cache.weight.resize(cache.n_int);
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int q = 0; q < n_q; ++q)
      cache.weight(e * n_q + q) =
          std::abs(cache.jac.det(e * n_q + q)) * cache.rule.weights(q);

  cache.B = strain_displacement_matrix(mesh, cache.basis, cache.rule, cache.jac);
  cache.shear = mat.shear;
  cache.bulk = mat.bulk;

  Mat DS_elast(36, cache.n_int);
  for (int q = 0; q < cache.n_int; ++q) {
    const Mat6 C = voigt::elastic_stiffness(mat.bulk(q), mat.shear(q));
    Eigen::Map<Mat6>(DS_elast.col(q).data()) = C;
  }
  cache.D_elast = block_diag_D(DS_elast, cache.weight, cache.dim);
  cache.K_elast = sandwich(cache.B, cache.D_elast);
  cache.elastic_assembly_seconds = seconds_since(t0);
  return cache;
}

SpMat assemble_elastic_stiffness(const AssemblyCache& cache) {
  return sandwich(cache.B, cache.D_elast);
}

SpMat assemble_tangent_stiffness(const AssemblyCache& cache, const Mat& DS,
                                 const BoolArray& plastic_cols) {
  if (DS.cols() != cache.n_int || plastic_cols.size() != cache.n_int)
    throw Error("assemble_tangent_stiffness: size mismatch");
  if (!plastic_cols.any()) return cache.K_elast;

  const int n_strain = cache.n_strain;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(plastic_cols.count()) * n_strain *
                   n_strain);
  for (int q = 0; q < cache.n_int; ++q) {
    if (!plastic_cols(q)) continue;
    Eigen::Map<const Mat6> block(DS.col(q).data());
    const Mat6 diff =
        block - voigt::elastic_stiffness(cache.bulk(q), cache.shear(q));
    const int base = n_strain * q;
    for (int i = 0; i < n_strain; ++i)
      for (int j = 0; j < n_strain; ++j) {
        const double v = cache.dim == 3
                             ? diff(i, j)
                             : diff(kPlaneRows[i], kPlaneRows[j]);
        triplets.emplace_back(base + i, base + j, cache.weight(q) * v);
      }
  }
  SpMat D_diff(cache.B.rows(), cache.B.rows());
  D_diff.setFromTriplets(triplets.begin(), triplets.end());
  return SpMat(cache.K_elast + sandwich(cache.B, D_diff));
}

Vec internal_forces(const AssemblyCache& cache, const Mat& S) {
  if (S.cols() != cache.n_int)
    throw Error("internal_forces: size mismatch");
  Vec scaled(static_cast<Eigen::Index>(cache.n_strain) * cache.n_int);
  for (int q = 0; q < cache.n_int; ++q)
    for (int i = 0; i < cache.n_strain; ++i)
      scaled(cache.n_strain * q + i) =
          cache.weight(q) *
          (cache.dim == 3 ? S(i, q) : S(kPlaneRows[i], q));
  return cache.B.transpose() * scaled;
}

ForceField constant_force(const Vec& value) {
  return [value](const Vec&) { return value; };
}

Vec external_forces(const Mesh& mesh, const AssemblyCache& cache,
                    const std::optional<ForceField>& volume_force,
                    const std::optional<ForceField>& traction) {
  const int dim = mesh.dim;
  Vec f = Vec::Zero(mesh.n_dofs());

  if (volume_force) {
    const int n_p = static_cast<int>(cache.basis.values.rows());
    const int n_q = static_cast<int>(cache.rule.weights.size());
    Vec x(dim);
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int q = 0; q < n_q; ++q) {
        const int m = e * n_q + q;
        x.setZero();
        for (int p = 0; p < n_p; ++p)
          x += cache.basis.values(p, q) * mesh.coord.col(mesh.elem(p, e));
        const Vec value = (*volume_force)(x);
        for (int p = 0; p < n_p; ++p) {
          const double w = cache.weight(m) * cache.basis.values(p, q);
          for (int i = 0; i < dim; ++i)
            f(dim * mesh.elem(p, e) + i) += w * value(i);
        }
      }
  }

  if (traction) {
    if (mesh.neumann_faces.empty())
      throw Error("external_forces: traction given but mesh has no Neumann "
                  "faces");
    const QuadratureRule face_rule = quadrature_face(mesh.elem_type);
    const ReferenceBasis face_basis =
        local_basis_face(mesh.elem_type, face_rule.points);
    const auto& faces = face_nodes(mesh.elem_type);
    const int n_fp = static_cast<int>(face_basis.values.rows());
    const int n_fq = static_cast<int>(face_rule.weights.size());
    Vec x(dim);
    for (const auto& [e, fi] : mesh.neumann_faces) {
      const auto& local = faces[fi];
      for (int q = 0; q < n_fq; ++q) {
        x.setZero();
        Mat tangents = Mat::Zero(dim, dim - 1);
        for (int p = 0; p < n_fp; ++p) {
          const auto node = mesh.coord.col(mesh.elem(local[p], e));
          x += face_basis.values(p, q) * node;
          for (int k = 0; k < dim - 1; ++k)
            tangents.col(k) += face_basis.gradients[k](p, q) * node;
        }
        double area = 0.0;
        if (dim == 3) {
          const Eigen::Vector3d t1 = tangents.col(0), t2 = tangents.col(1);
          area = t1.cross(t2).norm();
        } else {
          area = tangents.col(0).norm();
        }
        const Vec value = (*traction)(x);
        for (int p = 0; p < n_fp; ++p) {
          const double w = face_rule.weights(q) * area *
                           face_basis.values(p, q);
          for (int i = 0; i < dim; ++i)
            f(dim * mesh.elem(local[p], e) + i) += w * value(i);
        }
      }
    }
  }
  return f;
}

}  // namespace epfem
