#include "c1fem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

namespace c1fem {

namespace {

constexpr std::array<std::array<int, 2>, 3> kLocalEdges{{{1, 2}, {0, 2}, {0, 1}}};

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

int TriangleMesh::local_edge(int c, int e) const {
  for (int i = 0; i < 3; ++i) {
    if (cell_edges[c][i].edge == e) return i;
  }
  return -1;
}

TriangleMesh make_mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells) {
  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);
  mesh.cell_edges.resize(mesh.cells.size());

  std::map<std::array<int, 2>, int> edge_ids;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto& cell = mesh.cells[c];
    const double area =
        signed_area(mesh.vertices[cell[0]], mesh.vertices[cell[1]], mesh.vertices[cell[2]]);
    if (!(area > 0.0)) {
      throw Error("make_mesh: cell " + std::to_string(c) + " is inverted or degenerate");
    }
    for (int i = 0; i < 3; ++i) {
      const int a = cell[kLocalEdges[i][0]];
      const int b = cell[kLocalEdges[i][1]];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_ids.try_emplace(key, static_cast<int>(mesh.edges.size()));
      if (inserted) {
        mesh.edges.push_back(key);
        mesh.edge_cells.push_back({static_cast<int>(c), -1});
      } else {
        auto& owners = mesh.edge_cells[it->second];
        if (owners[1] >= 0) throw Error("make_mesh: edge shared by more than two cells");
        owners[1] = static_cast<int>(c);
      }
      mesh.cell_edges[c][i] = {it->second, a < b ? 1 : -1};
    }
  }

  std::vector<bool> on_boundary(mesh.vertices.size(), false);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_cells[e][1] < 0) {
      mesh.boundary_edges.push_back(e);
      on_boundary[mesh.edges[e][0]] = true;
      on_boundary[mesh.edges[e][1]] = true;
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (on_boundary[v]) mesh.boundary_vertices.push_back(v);
  }
  return mesh;
}

TriangleMesh build_unit_square_mesh(int n, double perturb) {
  if (n < 1) throw Error("build_unit_square_mesh: N must be at least 1");
  if (perturb < 0.0 || perturb >= 0.5) {
    throw Error("build_unit_square_mesh: perturbation must lie in [0, 0.5)");
  }
  const double pi = std::numbers::pi;
  std::vector<Point> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double x = double(i) / n;
      const double y = double(j) / n;
      Point p(x, y);
      if (i > 0 && i < n && j > 0 && j < n) {
        const double amp = perturb / n;
        p.x() += amp * std::sin(2.0 * pi * y) * std::sin(pi * x);
        p.y() += amp * std::sin(2.0 * pi * x) * std::sin(pi * y);
      }
      vertices.push_back(p);
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return make_mesh(std::move(vertices), std::move(cells));
}

VertexSizeField vertex_size_field(const TriangleMesh& mesh) {
  std::vector<double> sum(mesh.vertices.size(), 0.0);
  std::vector<int> count(mesh.vertices.size(), 0);
  for (const auto& cell : mesh.cells) {
    double diameter = 0.0;
    for (const auto& [a, b] : kLocalEdges) {
      diameter = std::max(diameter, (mesh.vertices[cell[a]] - mesh.vertices[cell[b]]).norm());
    }
    for (int v : cell) {
      sum[v] += diameter;
      ++count[v];
    }
  }
  VertexSizeField field;
  field.h.resize(sum.size(), 0.0);
  for (std::size_t v = 0; v < sum.size(); ++v) {
    if (count[v] > 0) field.h[v] = sum[v] / count[v];
  }
  return field;
}

CellGeometry cell_geometry(const std::array<Point, 3>& vertices, const std::array<double, 3>& vertex_h) {
  CellGeometry g;
  g.vertices = vertices;
  g.Jinv.col(0) = vertices[1] - vertices[0];
  g.Jinv.col(1) = vertices[2] - vertices[0];
  const double det = g.Jinv.determinant();
  if (std::abs(det) < 2e-14) throw Error("cell_geometry: degenerate cell");
  g.J = g.Jinv.inverse();
  g.detJinv_abs = std::abs(det);
  for (int i = 0; i < 3; ++i) {
    const auto [a, b] = kLocalEdges[i];
    const Eigen::Vector2d d = vertices[b] - vertices[a];
    g.edge_lengths[i] = d.norm();
    g.tangents[i] = d / g.edge_lengths[i];
    Eigen::Vector2d n(g.tangents[i].y(), -g.tangents[i].x());
    const Point mid = 0.5 * (vertices[a] + vertices[b]);
    if (n.dot(mid - vertices[i]) < 0.0) n = -n;
    g.normals[i] = n;
  }
  g.diameter = *std::max_element(g.edge_lengths.begin(), g.edge_lengths.end());
  g.vertex_h = vertex_h;
  return g;
}

CellGeometry cell_geometry(const std::array<Point, 3>& vertices) {
  double diameter = 0.0;
  for (const auto& [a, b] : kLocalEdges) diameter = std::max(diameter, (vertices[a] - vertices[b]).norm());
  return cell_geometry(vertices, {diameter, diameter, diameter});
}

CellGeometry cell_geometry(const TriangleMesh& mesh, int cell, const VertexSizeField& sizes) {
  if (cell < 0 || cell >= mesh.num_cells()) throw Error("cell_geometry: cell index out of range");
  const auto& c = mesh.cells[cell];
  return cell_geometry({mesh.vertices[c[0]], mesh.vertices[c[1]], mesh.vertices[c[2]]},
                       {sizes.h[c[0]], sizes.h[c[1]], sizes.h[c[2]]});
}

void write_mesh(std::ostream& out, const TriangleMesh& mesh) {
  out << std::setprecision(17);
  for (const Point& p : mesh.vertices) out << "v " << p.x() << ' ' << p.y() << '\n';
  for (const auto& c : mesh.cells) out << "c " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

}  // namespace c1fem
