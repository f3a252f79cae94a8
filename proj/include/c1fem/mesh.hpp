#pragma once

#include "c1fem/types.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace c1fem {

/// Local edge reference: global edge index and +1 if the cell's local edge
/// direction (lower local vertex to higher) matches the stored direction.
struct CellEdge {
  int edge = -1;
  int sign = 1;
};

/// Triangulation with full edge connectivity.  Cells are counter-clockwise;
/// edge i of a cell is opposite its local vertex i; stored edges list the
/// lower global vertex index first.
struct TriangleMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<CellEdge, 3>> cell_edges;
  // Incident cells per edge, lower cell index first; second is -1 on the boundary.
  std::vector<std::array<int, 2>> edge_cells;
  std::vector<int> boundary_edges;
  std::vector<int> boundary_vertices;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  bool is_boundary_edge(int e) const { return edge_cells[e][1] < 0; }

  /// Local index (0..2) of global edge e within cell c, or -1.
  int local_edge(int c, int e) const;
};

/// Builds connectivity for the given vertices and counter-clockwise cells.
TriangleMesh make_mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells);

/// N x N grid on the unit square, each square split along the (i,j)-(i+1,j+1)
/// diagonal.  Interior vertices move by
///   dx = (eps/N) sin(2 pi y) sin(pi x),  dy = (eps/N) sin(2 pi x) sin(pi y).
TriangleMesh build_unit_square_mesh(int n, double perturb = 0.0);

/// Characteristic size per vertex: mean diameter of the incident cells.
struct VertexSizeField {
  std::vector<double> h;
};

VertexSizeField vertex_size_field(const TriangleMesh& mesh);

/// Geometry of one affine cell.  The affine map F takes the cell to the
/// reference triangle, and J = dF = d(xhat)/d(x).
struct CellGeometry {
  std::array<Point, 3> vertices;
  Eigen::Matrix2d J;
  Eigen::Matrix2d Jinv;
  double detJinv_abs = 0.0;
  std::array<Eigen::Vector2d, 3> normals;   // outward, physical
  std::array<Eigen::Vector2d, 3> tangents;  // lower local vertex to higher
  std::array<double, 3> edge_lengths{};
  double diameter = 0.0;
  std::array<double, 3> vertex_h{};

  double area() const { return 0.5 * detJinv_abs; }
  Point to_physical(const Point& xhat) const { return vertices[0] + Jinv * xhat; }
  Point to_reference(const Point& x) const { return J * (x - vertices[0]); }
};

/// Geometry from explicit vertices; vertex_h defaults to the cell diameter.
CellGeometry cell_geometry(const std::array<Point, 3>& vertices);
CellGeometry cell_geometry(const std::array<Point, 3>& vertices, const std::array<double, 3>& vertex_h);
CellGeometry cell_geometry(const TriangleMesh& mesh, int cell, const VertexSizeField& sizes);

/// Plain-text export: "v x y" lines then "c i j k" lines (0-based).
void write_mesh(std::ostream& out, const TriangleMesh& mesh);

}  // namespace c1fem
