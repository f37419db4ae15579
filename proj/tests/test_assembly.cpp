#include "epfem/assembly.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace epfem;

namespace {

const std::vector<ElementFamily> kFamilies = {
    ElementFamily::P1, ElementFamily::P2, ElementFamily::Q1,
    ElementFamily::Q2};

Mesh small_mesh(ElementFamily family, int dim) {
  // level-0 meshes stay below 2000 dofs for every family
  return dim == 2 ? build_mesh_elastic_body(0, {family, 2})
                  : build_mesh_footing(0, {family, 3});
}

Mesh single_element_mesh(ElementType type, const Mat& coords) {
  Mesh mesh;
  mesh.dim = type.dim;
  mesh.elem_type = type;
  mesh.coord = coords;
  mesh.elem.resize(node_count(type), 1);
  for (int p = 0; p < node_count(type); ++p) mesh.elem(p, 0) = p;
  mesh.free_dof = BoolMat::Constant(type.dim, coords.cols(), true);
  mesh.dirichlet_fixed = Mat::Zero(type.dim, coords.cols());
  mesh.dirichlet_load = Mat::Zero(type.dim, coords.cols());
  return mesh;
}

// Element-loop dense-scatter oracle for the elastic stiffness matrix; keeps
// its own Jacobian and B-block computation.
Mat dense_elastic_oracle(const Mesh& mesh, double bulk, double shear) {
  const int dim = mesh.dim;
  const int n_strain = dim == 3 ? 6 : 3;
  const QuadratureRule rule = quadrature_volume(mesh.elem_type);
  const ReferenceBasis basis = local_basis_volume(mesh.elem_type, rule.points);
  const int n_p = node_count(mesh.elem_type);
  const int n_q = static_cast<int>(rule.weights.size());

  const Mat6 C6 = voigt::elastic_stiffness(bulk, shear);
  Mat C(n_strain, n_strain);
  const int rows2d[3] = {0, 1, 3};
  for (int i = 0; i < n_strain; ++i)
    for (int j = 0; j < n_strain; ++j)
      C(i, j) = dim == 3 ? C6(i, j) : C6(rows2d[i], rows2d[j]);

  Mat K = Mat::Zero(mesh.n_dofs(), mesh.n_dofs());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    Mat k_e = Mat::Zero(dim * n_p, dim * n_p);
    for (int q = 0; q < n_q; ++q) {
      Mat J = Mat::Zero(dim, dim);
      for (int p = 0; p < n_p; ++p)
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            J(i, j) +=
                basis.gradients[i](p, q) * mesh.coord(j, mesh.elem(p, e));
      const double det = J.determinant();
      const Mat Jinv = J.inverse();
      Mat B_loc = Mat::Zero(n_strain, dim * n_p);
      for (int p = 0; p < n_p; ++p) {
        Vec dphi = Vec::Zero(dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            dphi(i) += Jinv(i, j) * basis.gradients[j](p, q);
        if (dim == 3) {
          B_loc(0, 3 * p + 0) = dphi(0);
          B_loc(1, 3 * p + 1) = dphi(1);
          B_loc(2, 3 * p + 2) = dphi(2);
          B_loc(3, 3 * p + 0) = dphi(1);
          B_loc(3, 3 * p + 1) = dphi(0);
          B_loc(4, 3 * p + 1) = dphi(2);
          B_loc(4, 3 * p + 2) = dphi(1);
          B_loc(5, 3 * p + 0) = dphi(2);
          B_loc(5, 3 * p + 2) = dphi(0);
        } else {
          B_loc(0, 2 * p + 0) = dphi(0);
          B_loc(1, 2 * p + 1) = dphi(1);
          B_loc(2, 2 * p + 0) = dphi(1);
          B_loc(2, 2 * p + 1) = dphi(0);
        }
      }
      k_e += rule.weights(q) * std::abs(det) * B_loc.transpose() * C * B_loc;
    }
    for (int p = 0; p < n_p; ++p)
      for (int r = 0; r < n_p; ++r)
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            K(dim * mesh.elem(p, e) + i, dim * mesh.elem(r, e) + j) +=
                k_e(dim * p + i, dim * r + j);
  }
  return K;
}

Vec nodal_field(const Mesh& mesh, const std::function<Vec(const Vec&)>& fn) {
  Vec u(mesh.n_dofs());
  for (int n = 0; n < mesh.n_nodes(); ++n)
    u.segment(mesh.dim * n, mesh.dim) = fn(mesh.coord.col(n));
  return u;
}

Mat6 random_symmetric_block(std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat6 A;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) A(i, j) = u(rng);
  return 0.5 * (A + A.transpose());
}

}  // namespace

TEST_CASE("jacobians on reference-shaped and scaled elements") {
  {  // identity map: element equals the reference tetrahedron
    Mat coords(3, 4);
    coords << 0, 1, 0, 0,
              0, 0, 1, 0,
              0, 0, 0, 1;
    const Mesh mesh = single_element_mesh({ElementFamily::P1, 3}, coords);
    const QuadratureRule rule = quadrature_volume(mesh.elem_type);
    const ReferenceBasis basis =
        local_basis_volume(mesh.elem_type, rule.points);
    const JacobianData jac = jacobians(mesh, basis, rule);
    CHECK(jac.det(0) == doctest::Approx(1.0));
    CHECK((Eigen::Map<const Eigen::Matrix3d>(jac.inv.col(0).data()) -
           Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
  }
  {  // uniform scaling by h
    const double h = 0.37;
    Mat coords(3, 4);
    coords << 0, h, 0, 0,
              0, 0, h, 0,
              0, 0, 0, h;
    const Mesh mesh = single_element_mesh({ElementFamily::P1, 3}, coords);
    const QuadratureRule rule = quadrature_volume(mesh.elem_type);
    const ReferenceBasis basis =
        local_basis_volume(mesh.elem_type, rule.points);
    const JacobianData jac = jacobians(mesh, basis, rule);
    CHECK(jac.det(0) == doctest::Approx(h * h * h).epsilon(1e-13));
  }
}

TEST_CASE("jacobians of a random tetrahedron match the cofactor formulas") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  Mat coords(3, 4);
  double det_rows = 0.0;
  Eigen::Matrix3d J;
  do {
    coords << 0, 1, 0, 0,
              0, 0, 1, 0,
              0, 0, 0, 1;
    for (int p = 0; p < 4; ++p)
      for (int i = 0; i < 3; ++i) coords(i, p) += u(rng);
    for (int i = 0; i < 3; ++i)
      J.row(i) = (coords.col(i + 1) - coords.col(0)).transpose();
    det_rows = J.determinant();
  } while (det_rows <= 0.01);

  const Mesh mesh = single_element_mesh({ElementFamily::P1, 3}, coords);
  const QuadratureRule rule = quadrature_volume(mesh.elem_type);
  const ReferenceBasis basis = local_basis_volume(mesh.elem_type, rule.points);
  const JacobianData jac = jacobians(mesh, basis, rule);

  // cofactor expansion, written out independently of the implementation
  const double det = J(0, 0) * (J(1, 1) * J(2, 2) - J(1, 2) * J(2, 1)) -
                     J(0, 1) * (J(1, 0) * J(2, 2) - J(1, 2) * J(2, 0)) +
                     J(0, 2) * (J(1, 0) * J(2, 1) - J(1, 1) * J(2, 0));
  CHECK(jac.det(0) == doctest::Approx(det).epsilon(1e-12));
  Eigen::Matrix3d inv;
  inv << J(1, 1) * J(2, 2) - J(1, 2) * J(2, 1),
      -(J(0, 1) * J(2, 2) - J(0, 2) * J(2, 1)),
      J(0, 1) * J(1, 2) - J(0, 2) * J(1, 1),
      -(J(1, 0) * J(2, 2) - J(1, 2) * J(2, 0)),
      J(0, 0) * J(2, 2) - J(0, 2) * J(2, 0),
      -(J(0, 0) * J(1, 2) - J(0, 2) * J(1, 0)),
      J(1, 0) * J(2, 1) - J(1, 1) * J(2, 0),
      -(J(0, 0) * J(2, 1) - J(0, 1) * J(2, 0)),
      J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
  inv /= det;
  CHECK((Eigen::Map<const Eigen::Matrix3d>(jac.inv.col(0).data()) - inv)
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
}

TEST_CASE("strain-displacement matrix reproduces nodal fields") {
  for (int dim : {2, 3})
    for (ElementFamily family : kFamilies) {
      const Mesh mesh = small_mesh(family, dim);
      const auto [bulk, shear] = elastic_moduli(1.0, 0.25);
      const MaterialField mat = uniform_elastic(
          mesh.n_elements() *
              static_cast<int>(
                  quadrature_volume(mesh.elem_type).weights.size()),
          bulk, shear);
      const AssemblyCache cache = build_assembly_cache(mesh, mat);

      // rigid translation
      const Vec translation = nodal_field(mesh, [&](const Vec&) {
        Vec t(dim);
        for (int i = 0; i < dim; ++i) t(i) = 0.3 + 0.1 * i;
        return t;
      });
      CHECK((cache.B * translation).cwiseAbs().maxCoeff() <= 1e-12);

      // simple shear u = (x2, 0, ...)
      const Vec shear_field = nodal_field(mesh, [&](const Vec& x) {
        Vec v = Vec::Zero(dim);
        v(0) = x(1);
        return v;
      });
      const Mat E = cache.strains(shear_field);
      for (int q = 0; q < cache.n_int; ++q) {
        CHECK(E(3, q) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(E(0, q)) <= 1e-10);
        CHECK(std::abs(E(1, q)) <= 1e-10);
      }

      // affine field reproduces sym(A) everywhere
      Mat A = Mat::Zero(dim, dim);
      A(0, 0) = 0.02;
      A(0, 1) = 0.01;
      A(1, 0) = -0.015;
      A(1, 1) = 0.03;
      if (dim == 3) {
        A(2, 2) = -0.01;
        A(0, 2) = 0.007;
        A(2, 1) = 0.004;
      }
      const Vec affine =
          nodal_field(mesh, [&](const Vec& x) { return Vec(A * x); });
      const Mat sym = 0.5 * (A + A.transpose());
      const Mat Ea = cache.strains(affine);
      Vec6 expected = Vec6::Zero();
      expected(0) = sym(0, 0);
      expected(1) = sym(1, 1);
      expected(3) = 2 * sym(0, 1);
      if (dim == 3) {
        expected(2) = sym(2, 2);
        expected(4) = 2 * sym(1, 2);
        expected(5) = 2 * sym(2, 0);
      }
      for (int q = 0; q < cache.n_int; ++q)
        CHECK((Ea.col(q) - expected).cwiseAbs().maxCoeff() <= 1e-10);

      // weights integrate the domain measure; positivity holds whenever the
      // reference rule itself has positive weights (the 11-point degree-4
      // tet rule carries one negative weight)
      const double volume = dim == 2 ? 75.0 : 100.0;
      CHECK(cache.weight.sum() == doctest::Approx(volume).epsilon(1e-10));
      if (cache.rule.weights.minCoeff() > 0.0)
        CHECK(cache.weight.minCoeff() > 0.0);
    }
}

TEST_CASE("block_diag_D") {
  const Vec weight = (Vec(2) << 0.5, 2.0).finished();
  SUBCASE("zero blocks give a zero matrix") {
    const SpMat D = block_diag_D(Mat::Zero(36, 2), weight, 3);
    CHECK(Mat(D).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single elastic block") {
    const Mat6 C = voigt::elastic_stiffness(1.3, 0.7);
    Mat DS(36, 1);
    Eigen::Map<Mat6>(DS.col(0).data()) = C;
    const SpMat D = block_diag_D(DS, Vec::Constant(1, 0.5), 3);
    CHECK((Mat(D) - 0.5 * C).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("random blocks against dense construction") {
    std::mt19937 rng(37);
    Mat DS(36, 2);
    for (int q = 0; q < 2; ++q)
      Eigen::Map<Mat6>(DS.col(q).data()) = random_symmetric_block(rng, 1.0);
    for (int dim : {2, 3}) {
      const int n_strain = dim == 3 ? 6 : 3;
      const Mat D = Mat(block_diag_D(DS, weight, dim));
      const int rows2d[3] = {0, 1, 3};
      for (int q = 0; q < 2; ++q) {
        Eigen::Map<const Mat6> blockq(DS.col(q).data());
        for (int i = 0; i < n_strain; ++i)
          for (int j = 0; j < n_strain; ++j) {
            const double want =
                weight(q) *
                (dim == 3 ? blockq(i, j) : blockq(rows2d[i], rows2d[j]));
            CHECK(D(n_strain * q + i, n_strain * q + j) ==
                  doctest::Approx(want).epsilon(1e-14));
          }
      }
    }
  }
}

TEST_CASE("elastic stiffness equals the element-loop dense oracle") {
  for (int dim : {2, 3})
    for (ElementFamily family : kFamilies) {
      const Mesh mesh = small_mesh(family, dim);
      REQUIRE(mesh.n_dofs() <= 2000);
      const auto [bulk, shear] = elastic_moduli(10.0, 0.3);
      const int n_q =
          static_cast<int>(quadrature_volume(mesh.elem_type).weights.size());
      const MaterialField mat =
          uniform_elastic(mesh.n_elements() * n_q, bulk, shear);
      const AssemblyCache cache = build_assembly_cache(mesh, mat);
      const Mat dense = dense_elastic_oracle(mesh, bulk, shear);
      const double scale = dense.cwiseAbs().maxCoeff();
      CHECK((Mat(cache.K_elast) - dense).cwiseAbs().maxCoeff() <=
            1e-10 * scale);

      // rigid translations lie in the nullspace of the unrestricted matrix
      const Vec translation = nodal_field(mesh, [&](const Vec&) {
        return Vec(Vec::Constant(dim, 1.0));
      });
      CHECK((cache.K_elast * translation).cwiseAbs().maxCoeff() <=
            1e-9 * scale);

      // symmetry
      const Mat dense_K = Mat(cache.K_elast);
      CHECK((dense_K - dense_K.transpose()).cwiseAbs().maxCoeff() <=
            1e-10 * scale);
    }
}

TEST_CASE("tangent split identity") {
  std::mt19937 rng(41);
  for (int dim : {2, 3}) {
    const Mesh mesh = small_mesh(ElementFamily::Q1, dim);
    const auto [bulk, shear] = elastic_moduli(5.0, 0.2);
    const int n_q =
        static_cast<int>(quadrature_volume(mesh.elem_type).weights.size());
    const int n_int = mesh.n_elements() * n_q;
    const MaterialField mat = uniform_elastic(n_int, bulk, shear);
    const AssemblyCache cache = build_assembly_cache(mesh, mat);
    const Mat6 C = voigt::elastic_stiffness(bulk, shear);

    for (double fraction : {0.0, 0.5, 1.0}) {
      Mat DS(36, n_int);
      BoolArray plastic(n_int);
      for (int q = 0; q < n_int; ++q) {
        plastic(q) = q < fraction * n_int;
        Eigen::Map<Mat6> blockq(DS.col(q).data());
        blockq = plastic(q) ? Mat6(C + 0.3 * random_symmetric_block(rng, 1.0))
                            : C;
      }
      const SpMat K_split = assemble_tangent_stiffness(cache, DS, plastic);
      const SpMat K_direct =
          sandwich(cache.B, block_diag_D(DS, cache.weight, dim));
      const double scale = Mat(K_direct).cwiseAbs().maxCoeff();
      CHECK((Mat(K_split) - Mat(K_direct)).cwiseAbs().maxCoeff() <=
            1e-10 * scale);

      if (fraction == 0.0) {
        // bitwise equality with the cached elastic matrix
        REQUIRE(K_split.nonZeros() == cache.K_elast.nonZeros());
        for (Eigen::Index k = 0; k < K_split.nonZeros(); ++k)
          CHECK(K_split.valuePtr()[k] == cache.K_elast.valuePtr()[k]);
      }
    }
  }
}

TEST_CASE("internal forces") {
  const Mesh mesh = small_mesh(ElementFamily::P2, 2);
  const auto [bulk, shear] = elastic_moduli(3.0, 0.3);
  const int n_q =
      static_cast<int>(quadrature_volume(mesh.elem_type).weights.size());
  const int n_int = mesh.n_elements() * n_q;
  const MaterialField mat = uniform_elastic(n_int, bulk, shear);
  const AssemblyCache cache = build_assembly_cache(mesh, mat);

  SUBCASE("zero stress gives zero forces") {
    CHECK(internal_forces(cache, Mat::Zero(6, n_int)).cwiseAbs().maxCoeff() ==
          0.0);
  }

  SUBCASE("elastic stress reproduces K_elast * u") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec disp(mesh.n_dofs());
    for (int k = 0; k < mesh.n_dofs(); ++k) disp(k) = u(rng);
    const Mat E = cache.strains(disp);
    const ElasticEval ev = constitutive_elastic(E, mat);
    const Vec F = internal_forces(cache, ev.S);
    const Vec Ku = cache.K_elast * disp;
    CHECK((F - Ku).cwiseAbs().maxCoeff() <= 1e-10 * Ku.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("external forces") {
  SUBCASE("no fields give zero") {
    const Mesh mesh = small_mesh(ElementFamily::Q1, 2);
    const int n_q = static_cast<int>(
        quadrature_volume(mesh.elem_type).weights.size());
    const MaterialField mat =
        uniform_elastic(mesh.n_elements() * n_q, 1.0, 1.0);
    const AssemblyCache cache = build_assembly_cache(mesh, mat);
    const Vec f = external_forces(mesh, cache, std::nullopt, std::nullopt);
    CHECK(f.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("constant volume force integrates to volume times density") {
    for (int dim : {2, 3})
      for (ElementFamily family : kFamilies) {
        const Mesh mesh = small_mesh(family, dim);
        const int n_q = static_cast<int>(
            quadrature_volume(mesh.elem_type).weights.size());
        const MaterialField mat =
            uniform_elastic(mesh.n_elements() * n_q, 1.0, 1.0);
        const AssemblyCache cache = build_assembly_cache(mesh, mat);
        Vec density = Vec::Zero(dim);
        density(1) = 2.5;
        const Vec f = external_forces(mesh, cache, constant_force(density),
                                      std::nullopt);
        double total = 0.0;
        for (int n = 0; n < mesh.n_nodes(); ++n) total += f(dim * n + 1);
        const double volume = dim == 2 ? 75.0 : 100.0;
        CHECK(total == doctest::Approx(2.5 * volume).epsilon(1e-10));
      }
  }

  SUBCASE("unit traction on the unit top face of a cube") {
    Mat coords(3, 8);
    coords << 0, 1, 1, 0, 0, 1, 1, 0,
              0, 0, 1, 1, 0, 0, 1, 1,
              0, 0, 0, 0, 1, 1, 1, 1;
    Mesh mesh = single_element_mesh({ElementFamily::Q1, 3}, coords);
    mesh.neumann_faces.emplace_back(0, 1);  // z = +1 face
    const MaterialField mat = uniform_elastic(8, 1.0, 1.0);
    const AssemblyCache cache = build_assembly_cache(mesh, mat);
    const Vec traction = (Vec(3) << 0.0, 0.0, 1.0).finished();
    const Vec f =
        external_forces(mesh, cache, std::nullopt, constant_force(traction));
    double total = 0.0;
    for (int n = 0; n < 8; ++n) total += f(3 * n + 2);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("traction on the elastic body sums to density times top area") {
    for (int dim : {2, 3}) {
      const Mesh mesh =
          dim == 2 ? build_mesh_elastic_body(0, {ElementFamily::P2, 2})
                   : build_mesh_elastic_body(0, {ElementFamily::P1, 3});
      const int n_q = static_cast<int>(
          quadrature_volume(mesh.elem_type).weights.size());
      const MaterialField mat =
          uniform_elastic(mesh.n_elements() * n_q, 1.0, 1.0);
      const AssemblyCache cache = build_assembly_cache(mesh, mat);
      Vec traction = Vec::Zero(dim);
      traction(1) = 200.0;
      const Vec f =
          external_forces(mesh, cache, std::nullopt, constant_force(traction));
      double total = 0.0;
      for (int n = 0; n < mesh.n_nodes(); ++n) total += f(dim * n + 1);
      // top side has length 10 (2D) or area 10 x thickness 1 (3D)
      CHECK(total == doctest::Approx(200.0 * 10.0).epsilon(1e-10));
    }
  }

  SUBCASE("traction without Neumann faces is a configuration error") {
    const Mesh mesh = build_mesh_footing(0, {ElementFamily::P1, 2});
    const int n_q = static_cast<int>(
        quadrature_volume(mesh.elem_type).weights.size());
    const MaterialField mat =
        uniform_elastic(mesh.n_elements() * n_q, 1.0, 1.0);
    const AssemblyCache cache = build_assembly_cache(mesh, mat);
    const Vec traction = (Vec(2) << 0.0, 1.0).finished();
    CHECK_THROWS_AS(
        external_forces(mesh, cache, std::nullopt, constant_force(traction)),
        Error);
  }
}

TEST_CASE("degenerate elements are reported") {
  Mat coords(3, 4);  // zero-volume tetrahedron
  coords << 0, 1, 0, 1,
            0, 0, 1, 1,
            0, 0, 0, 0;
  const Mesh mesh = single_element_mesh({ElementFamily::P1, 3}, coords);
  const QuadratureRule rule = quadrature_volume(mesh.elem_type);
  const ReferenceBasis basis = local_basis_volume(mesh.elem_type, rule.points);
  CHECK_THROWS_WITH_AS(jacobians(mesh, basis, rule),
                       doctest::Contains("element 0"), Error);
}
