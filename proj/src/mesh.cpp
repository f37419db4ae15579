#include "epfem/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

namespace epfem {

BoolArray Mesh::free_mask() const {
  BoolArray mask(n_dofs());
  for (int j = 0; j < n_nodes(); ++j)
    for (int i = 0; i < dim; ++i) mask(dim * j + i) = free_dof(i, j);
  return mask;
}

Vec Mesh::dirichlet_values(double load_scale) const {
  Vec values = Vec::Zero(n_dofs());
  for (int j = 0; j < n_nodes(); ++j)
    for (int i = 0; i < dim; ++i)
      if (!free_dof(i, j))
        values(dim * j + i) =
            dirichlet_fixed(i, j) + load_scale * dirichlet_load(i, j);
  return values;
}

namespace {

using FineOffset = std::array<int, 3>;

// Node tuples of the elements inside one cell, as fine-grid offsets from the
// cell origin (the fine grid halves the cell spacing so that midside nodes
// land on integer coordinates).
std::vector<std::vector<FineOffset>> cell_elements(ElementType type) {
  std::vector<std::vector<FineOffset>> out;
  const bool quadratic =
      type.family == ElementFamily::P2 || type.family == ElementFamily::Q2;
  if (type.dim == 2) {
    switch (type.family) {
      case ElementFamily::P1:
      case ElementFamily::P2: {
        const std::array<std::array<FineOffset, 3>, 2> tris = {
            {{{{0, 0, 0}, {2, 0, 0}, {2, 2, 0}}},
             {{{0, 0, 0}, {2, 2, 0}, {0, 2, 0}}}}};
        for (const auto& tri : tris) {
          std::vector<FineOffset> nodes(tri.begin(), tri.end());
          if (quadratic)
            for (const auto& [a, b] :
                 std::array<std::array<int, 2>, 3>{{{0, 1}, {1, 2}, {0, 2}}})
              nodes.push_back({(tri[a][0] + tri[b][0]) / 2,
                               (tri[a][1] + tri[b][1]) / 2, 0});
          out.push_back(std::move(nodes));
        }
        break;
      }
      case ElementFamily::Q1:
      case ElementFamily::Q2: {
        std::vector<FineOffset> nodes = {
            {0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0}};
        if (quadratic) {
          const std::vector<FineOffset> mids = {
              {1, 0, 0}, {2, 1, 0}, {1, 2, 0}, {0, 1, 0}};
          nodes.insert(nodes.end(), mids.begin(), mids.end());
        }
        out.push_back(std::move(nodes));
        break;
      }
    }
    return out;
  }

  switch (type.family) {
    case ElementFamily::P1:
    case ElementFamily::P2: {
      // Kuhn decomposition: six tetrahedra along the main diagonal; odd
      // permutations get their last two vertices swapped to keep det J > 0.
      const std::array<std::array<int, 3>, 6> perms = {
          {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
      const std::array<bool, 6> odd = {false, true, true, false, false, true};
      for (int t = 0; t < 6; ++t) {
        std::array<FineOffset, 4> v;
        v[0] = {0, 0, 0};
        for (int k = 0; k < 3; ++k) {
          v[k + 1] = v[k];
          v[k + 1][perms[t][k]] += 2;
        }
        if (odd[t]) std::swap(v[2], v[3]);
        std::vector<FineOffset> nodes(v.begin(), v.end());
        if (quadratic) {
          const std::array<std::array<int, 2>, 6> edges = {
              {{0, 1}, {1, 2}, {0, 2}, {1, 3}, {2, 3}, {0, 3}}};
          for (const auto& [a, b] : edges)
            nodes.push_back({(v[a][0] + v[b][0]) / 2, (v[a][1] + v[b][1]) / 2,
                             (v[a][2] + v[b][2]) / 2});
        }
        out.push_back(std::move(nodes));
      }
      break;
    }
    case ElementFamily::Q1:
    case ElementFamily::Q2: {
      std::vector<FineOffset> nodes = {{0, 0, 0}, {2, 0, 0}, {2, 2, 0},
                                       {0, 2, 0}, {0, 0, 2}, {2, 0, 2},
                                       {2, 2, 2}, {0, 2, 2}};
      if (quadratic) {
        const std::vector<FineOffset> mids = {
            {1, 0, 0}, {2, 1, 0}, {1, 2, 0}, {0, 1, 0},
            {1, 0, 2}, {2, 1, 2}, {1, 2, 2}, {0, 1, 2},
            {0, 0, 1}, {2, 0, 1}, {2, 2, 1}, {0, 2, 1}};
        nodes.insert(nodes.end(), mids.begin(), mids.end());
      }
      out.push_back(std::move(nodes));
      break;
    }
  }
  return out;
}

struct StructuredGrid {
  ElementType type;
  int nx = 0, ny = 0, nz = 0;  // cells; nz = 0 in 2D
  double hx = 0, hy = 0, hz = 0;
  std::vector<bool> active;  // nx * ny in-plane cell mask

  bool cell_active(int i, int j) const { return active[j * nx + i]; }
};

struct BuildResult {
  Mesh mesh;
  std::vector<std::array<int, 3>> fine;  // per-node fine coordinates
  int amax = 0, bmax = 0, cmax = 0;
};

BuildResult build_structured(const StructuredGrid& grid) {
  const ElementType type = grid.type;
  const int dim = type.dim;
  const int fx = 2 * grid.nx + 1;
  const int fy = 2 * grid.ny + 1;
  const int fz = dim == 3 ? 2 * grid.nz + 1 : 1;
  const auto fine_id = [&](int a, int b, int c) {
    return (static_cast<std::int64_t>(c) * fy + b) * fx + a;
  };

  const auto patterns = cell_elements(type);
  const int n_p = node_count(type);

  // First pass: mark used fine points.
  std::vector<char> used(static_cast<std::size_t>(fx) * fy * fz, 0);
  const int n_layers = dim == 3 ? grid.nz : 1;
  std::int64_t n_elems = 0;
  for (int k = 0; k < n_layers; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        if (!grid.cell_active(i, j)) continue;
        for (const auto& pattern : patterns) {
          ++n_elems;
          for (const auto& off : pattern)
            used[fine_id(2 * i + off[0], 2 * j + off[1], 2 * k + off[2])] = 1;
        }
      }

  // Node ids in (z, y, x) lexicographic order.
  std::vector<int> node_of(used.size(), -1);
  int n_nodes = 0;
  for (std::size_t p = 0; p < used.size(); ++p)
    if (used[p]) node_of[p] = n_nodes++;

  BuildResult result;
  Mesh& mesh = result.mesh;
  mesh.dim = dim;
  mesh.elem_type = type;
  mesh.coord.resize(dim, n_nodes);
  mesh.elem.resize(n_p, n_elems);
  result.fine.resize(n_nodes);
  result.amax = fx - 1;
  result.bmax = fy - 1;
  result.cmax = fz - 1;

  for (int c = 0; c < fz; ++c)
    for (int b = 0; b < fy; ++b)
      for (int a = 0; a < fx; ++a) {
        const int id = node_of[fine_id(a, b, c)];
        if (id < 0) continue;
        result.fine[id] = {a, b, c};
        mesh.coord(0, id) = 0.5 * grid.hx * a;
        mesh.coord(1, id) = 0.5 * grid.hy * b;
        if (dim == 3) mesh.coord(2, id) = 0.5 * grid.hz * c;
      }

  std::int64_t e = 0;
  for (int k = 0; k < n_layers; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        if (!grid.cell_active(i, j)) continue;
        for (const auto& pattern : patterns) {
          for (int p = 0; p < n_p; ++p)
            mesh.elem(p, e) = node_of[fine_id(2 * i + pattern[p][0],
                                              2 * j + pattern[p][1],
                                              2 * k + pattern[p][2])];
          ++e;
        }
      }

  mesh.free_dof = BoolMat::Constant(dim, n_nodes, true);
  mesh.dirichlet_fixed = Mat::Zero(dim, n_nodes);
  mesh.dirichlet_load = Mat::Zero(dim, n_nodes);
  return result;
}

void constrain(Mesh& mesh, int dir, int node, double fixed, double load) {
  mesh.free_dof(dir, node) = false;
  mesh.dirichlet_fixed(dir, node) = fixed;
  mesh.dirichlet_load(dir, node) = load;
}

int default_layers(double h) {
  return std::max(1, static_cast<int>(std::lround(1.0 / h)));
}

}  // namespace

Mesh build_mesh_elastic_body(int level, ElementType elem_type, int layers) {
  if (level < 0) throw Error("build_mesh_elastic_body: level must be >= 0");
  StructuredGrid grid;
  grid.type = elem_type;
  const int block = 5 << level;  // cells per 5-unit block side
  grid.nx = grid.ny = 2 * block;
  grid.hx = grid.hy = 5.0 / block;
  if (elem_type.dim == 3) {
    grid.nz = layers > 0 ? layers : default_layers(grid.hx);
    grid.hz = 1.0 / grid.nz;
  }
  grid.active.assign(static_cast<std::size_t>(grid.nx) * grid.ny, true);
  for (int j = 0; j < block; ++j)  // remove the bottom-left block
    for (int i = 0; i < block; ++i) grid.active[j * grid.nx + i] = false;

  BuildResult built = build_structured(grid);
  Mesh mesh = std::move(built.mesh);
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const auto& [a, b, c] = built.fine[n];
    if (a == 0) constrain(mesh, 0, n, 0.0, 0.0);  // symmetry on the left
    if (b == 0) {                                 // bottom: u.n = 0, u1 = u_D
      constrain(mesh, 1, n, 0.0, 0.0);
      constrain(mesh, 0, n, 0.0, 1.0);
    }
    if (mesh.dim == 3 && (c == 0 || c == built.cmax))
      constrain(mesh, 2, n, 0.0, 0.0);
  }
  for (const auto& [e, f] : boundary_faces(mesh)) {
    bool on_top = true;
    for (int p : face_nodes(elem_type)[f])
      on_top = on_top && built.fine[mesh.elem(p, e)][1] == built.bmax;
    if (on_top) mesh.neumann_faces.emplace_back(e, f);
  }
  return mesh;
}

Mesh build_mesh_footing(int level, ElementType elem_type, int layers) {
  if (level < 0) throw Error("build_mesh_footing: level must be >= 0");
  const bool quadratic = elem_type.family == ElementFamily::P2 ||
                         elem_type.family == ElementFamily::Q2;
  StructuredGrid grid;
  grid.type = elem_type;
  const int cells = (quadratic ? 5 : 10) << level;
  grid.nx = grid.ny = cells;
  grid.hx = grid.hy = 10.0 / cells;
  if (elem_type.dim == 3) {
    grid.nz = layers > 0 ? layers : default_layers(grid.hx);
    grid.hz = 1.0 / grid.nz;
  }
  grid.active.assign(static_cast<std::size_t>(grid.nx) * grid.ny, true);

  BuildResult built = build_structured(grid);
  Mesh mesh = std::move(built.mesh);
  // footing occupies x1 in [0, 1]: fine coordinate a <= 2 / hx
  const int a_foot = static_cast<int>(std::lround(2.0 / grid.hx));
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const auto& [a, b, c] = built.fine[n];
    if (a == 0 || a == built.amax) constrain(mesh, 0, n, 0.0, 0.0);
    if (b == 0) constrain(mesh, 1, n, 0.0, 0.0);
    if (b == built.bmax && a <= a_foot) {
      constrain(mesh, 1, n, 0.0, -1.0);  // u2 = -u_D under the footing
      constrain(mesh, 0, n, 0.0, 0.0);   // rough footing
    }
    if (mesh.dim == 3 && (c == 0 || c == built.cmax))
      constrain(mesh, 2, n, 0.0, 0.0);
  }
  return mesh;
}

std::vector<std::pair<int, int>> boundary_faces(const Mesh& mesh) {
  const auto& faces = face_nodes(mesh.elem_type);
  std::map<std::vector<int>, std::pair<int, std::pair<int, int>>> table;
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      std::vector<int> key;
      key.reserve(faces[f].size());
      for (int p : faces[f]) key.push_back(mesh.elem(p, e));
      std::sort(key.begin(), key.end());
      auto [it, inserted] = table.try_emplace(key, 0, std::make_pair(e, f));
      ++it->second.first;
    }
  std::vector<std::pair<int, int>> result;
  for (const auto& [key, entry] : table)
    if (entry.first == 1) result.push_back(entry.second);
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<int> boundary_nodes(const Mesh& mesh) {
  const auto& faces = face_nodes(mesh.elem_type);
  std::vector<char> on_boundary(mesh.n_nodes(), 0);
  for (const auto& [e, f] : boundary_faces(mesh))
    for (int p : faces[f]) on_boundary[mesh.elem(p, e)] = 1;
  std::vector<int> nodes;
  for (int n = 0; n < mesh.n_nodes(); ++n)
    if (on_boundary[n]) nodes.push_back(n);
  return nodes;
}

void write_mesh_text(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_mesh_text: cannot open " + path);
  out.precision(17);
  out << "epfem-mesh 1\n";
  out << "dim " << mesh.dim << "\n";
  out << "elem " << to_string(mesh.elem_type.family) << "\n";
  out << "nodes " << mesh.n_nodes() << "\n";
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    out << n;
    for (int i = 0; i < mesh.dim; ++i) out << " " << mesh.coord(i, n);
    out << "\n";
  }
  out << "elements " << mesh.n_elements() << " " << mesh.elem.rows() << "\n";
  for (int e = 0; e < mesh.n_elements(); ++e) {
    out << e;
    for (int p = 0; p < mesh.elem.rows(); ++p) out << " " << mesh.elem(p, e);
    out << "\n";
  }
  int n_constrained = 0;
  for (int n = 0; n < mesh.n_nodes(); ++n)
    for (int i = 0; i < mesh.dim; ++i)
      if (!mesh.free_dof(i, n)) ++n_constrained;
  out << "dirichlet " << n_constrained << "\n";
  for (int n = 0; n < mesh.n_nodes(); ++n)
    for (int i = 0; i < mesh.dim; ++i)
      if (!mesh.free_dof(i, n))
        out << n << " " << i << " " << mesh.dirichlet_fixed(i, n) << " "
            << mesh.dirichlet_load(i, n) << "\n";
  out << "neumann " << mesh.neumann_faces.size() << "\n";
  for (const auto& [e, f] : mesh.neumann_faces) out << e << " " << f << "\n";
}

Mesh read_mesh_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_mesh_text: cannot open " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "epfem-mesh" || version != 1)
    throw Error("read_mesh_text: unrecognized header in " + path);
  Mesh mesh;
  std::string family;
  int n_nodes = 0, n_elems = 0, n_p = 0;
  in >> tag >> mesh.dim;
  in >> tag >> family;
  mesh.elem_type = ElementType{family_from_string(family), mesh.dim};
  in >> tag >> n_nodes;
  mesh.coord.resize(mesh.dim, n_nodes);
  for (int n = 0; n < n_nodes; ++n) {
    int id = 0;
    in >> id;
    for (int i = 0; i < mesh.dim; ++i) in >> mesh.coord(i, id);
  }
  in >> tag >> n_elems >> n_p;
  if (n_p != node_count(mesh.elem_type))
    throw Error("read_mesh_text: node count mismatch for element type");
  mesh.elem.resize(n_p, n_elems);
  for (int e = 0; e < n_elems; ++e) {
    int id = 0;
    in >> id;
    for (int p = 0; p < n_p; ++p) {
      in >> mesh.elem(p, id);
      if (mesh.elem(p, id) < 0 || mesh.elem(p, id) >= n_nodes)
        throw Error("read_mesh_text: node index out of range");
    }
  }
  mesh.free_dof = BoolMat::Constant(mesh.dim, n_nodes, true);
  mesh.dirichlet_fixed = Mat::Zero(mesh.dim, n_nodes);
  mesh.dirichlet_load = Mat::Zero(mesh.dim, n_nodes);
  int n_constrained = 0;
  in >> tag >> n_constrained;
  for (int k = 0; k < n_constrained; ++k) {
    int n = 0, dir = 0;
    double fixed = 0, load = 0;
    in >> n >> dir >> fixed >> load;
    constrain(mesh, dir, n, fixed, load);
  }
  int n_neumann = 0;
  in >> tag >> n_neumann;
  for (int k = 0; k < n_neumann; ++k) {
    int e = 0, f = 0;
    in >> e >> f;
    mesh.neumann_faces.emplace_back(e, f);
  }
  if (!in) throw Error("read_mesh_text: truncated file " + path);
  return mesh;
}

}  // namespace epfem
