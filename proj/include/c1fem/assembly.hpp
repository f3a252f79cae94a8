#pragma once

#include "c1fem/mesh.hpp"
#include "c1fem/transform.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <iosfwd>
#include <vector>

namespace c1fem {

/// CSR storage: outerIndexPtr() are the row offsets, innerIndexPtr() the
/// (sorted) column indices.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Local-to-global map.  Global numbering is entity-major: all vertex
/// blocks, then edge blocks, then cell-interior blocks.
struct DofMap {
  int total_dofs = 0;
  int dofs_per_cell = 0;
  std::vector<int> index;  // cell-major, dofs_per_cell entries per cell
  std::vector<int> sign;

  const int* cell_dofs(int c) const { return index.data() + std::size_t(c) * dofs_per_cell; }
  const int* cell_signs(int c) const { return sign.data() + std::size_t(c) * dofs_per_cell; }
};

DofMap build_dof_map(const TriangleMesh& mesh, const MappedElement& element);

/// 90 degree counter-clockwise rotation of the stored edge direction.
Eigen::Vector2d global_edge_normal(const TriangleMesh& mesh, int edge);

enum class FormKind { PoissonNitsche, Plate, PlateIP, PlateClampedNitsche };

struct FormSpec {
  FormKind kind = FormKind::PoissonNitsche;
  double alpha = 0.0;
  double nu = 0.0;
  double beta1 = 100.0;
  double beta2 = 100.0;
  // Quadrature degrees; -1 picks 2 * embedded degree.
  int cell_degree = -1;
  int facet_degree = -1;

  static FormSpec poisson_nitsche(double alpha);
  static FormSpec plate(double nu);
  /// Boundary edges reuse alpha for both clamped penalties.
  static FormSpec plate_ip(double alpha);
  static FormSpec plate_clamped_nitsche(double nu, double beta1, double beta2);

  void validate() const;
};

std::string to_string(FormKind kind);

/// Default penalties.  Poisson: 10 p^2.  Interior penalty: 100 up to cubics,
/// 10 k^4 beyond (the coercivity threshold is about 260 for P4 and 1500 for
/// P5).  Clamped plate: beta1 = 10 p^4, beta2 = 10 p^2.
double default_poisson_penalty(const MappedElement& element);
double default_ip_penalty(int degree);
FormSpec default_clamped_plate(const MappedElement& element, double nu);

/// Whether the form can be assembled with the element.
bool compatible(FormKind kind, const MappedElement& element);

/// Mesh, element and per-cell geometry and transformation, built once.
class FunctionSpace {
 public:
  FunctionSpace(TriangleMesh mesh, MappedElement element, bool scaled = true);

  const TriangleMesh& mesh() const { return mesh_; }
  const MappedElement& element() const { return element_; }
  const DofMap& dofmap() const { return dofmap_; }
  bool scaled() const { return scaled_; }
  int num_dofs() const { return dofmap_.total_dofs; }
  const CellGeometry& geometry(int c) const { return geometry_[c]; }
  const TransformMatrix& transform(int c) const { return transform_[c]; }

  /// Reference-basis coefficients of the restriction of u to cell c.
  Vector local_coefficients(int c, const Vector& u) const;

 private:
  TriangleMesh mesh_;
  MappedElement element_;
  bool scaled_;
  DofMap dofmap_;
  std::vector<CellGeometry> geometry_;
  std::vector<TransformMatrix> transform_;
};

using JetFunction = std::function<Jet(const Point&)>;
using ScalarFunction = std::function<double(const Point&)>;

/// Global DoF vector whose nodal values match f.
Vector interpolate(const FunctionSpace& space, const JetFunction& f);

SparseMatrix assemble_operator(const FunctionSpace& space, const FormSpec& form);
SparseMatrix assemble_operator(const TriangleMesh& mesh, const MappedElement& element, const FormSpec& form,
                               bool scaled = true);

/// Cellwise (f, v); quadrature of degree 2p + 2.
Vector assemble_load(const FunctionSpace& space, const ScalarFunction& f);

/// Physical derivatives up to `order` of the pulled-back reference basis,
/// indexed like Tabulation::values.
std::vector<Matrix> physical_derivatives(const Tabulation& tab, const Eigen::Matrix2d& J, int order);

/// MatrixMarket coordinate, real symmetric (lower triangle).
void write_matrix_market(std::ostream& out, const SparseMatrix& A);
/// One value per line, 17 significant digits.
void write_vector(std::ostream& out, const Vector& v);

}  // namespace c1fem
