#pragma once

#include "c1fem/polyset.hpp"
#include "c1fem/types.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace c1fem {

enum class Family { Lagrange, Hermite, Morley, Argyris, Bell };

std::string to_string(Family family);

enum class FunctionalKind { PointEval, PointDeriv, PointSecondDeriv, EdgeNormalDeriv };

/// Voigt ordering of second-derivative degrees of freedom.
enum class HessianComponent { xx = 0, xy = 1, yy = 2 };

/// Topological entity a degree of freedom is attached to.
struct Entity {
  int dim = 0;
  int index = 0;
};

/// A degree of freedom.  The same type describes reference nodes and their
/// physical counterparts; only the point and direction change.
struct NodalFunctional {
  FunctionalKind kind = FunctionalKind::PointEval;
  Point point = Point::Zero();
  Entity entity;
  // PointDeriv: unit derivative direction.  EdgeNormalDeriv: unit outward normal.
  Eigen::Vector2d direction = Eigen::Vector2d::Zero();
  HessianComponent component = HessianComponent::xx;
  int edge = -1;

  double apply(const Jet& f) const;
};

/// Reference triangle (0,0), (1,0), (0,1).  Edge i is opposite vertex i and
/// runs from its lower-numbered endpoint to its higher-numbered one.
namespace reference_cell {
Point vertex(int i);
std::array<int, 2> edge_vertices(int edge);
Point edge_midpoint(int edge);
Eigen::Vector2d edge_tangent(int edge);
Eigen::Vector2d edge_normal(int edge);
double edge_length(int edge);
}  // namespace reference_cell

/// Nodal basis on the reference triangle expressed in the orthonormal
/// PolyBasis: basis function j is sum_m coeffs()(j, m) P_m.
class ReferenceElement {
 public:
  ReferenceElement(Family family, int degree, std::vector<NodalFunctional> functionals,
                   Matrix coeffs);

  Family family() const { return family_; }
  /// Degree of the polynomial space the element is embedded in.
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(functionals_.size()); }
  const std::vector<NodalFunctional>& functionals() const { return functionals_; }
  const Matrix& coeffs() const { return coeffs_; }
  const PolyBasis& poly() const { return poly_; }
  std::string name() const;

 private:
  Family family_;
  int degree_;
  PolyBasis poly_;
  std::vector<NodalFunctional> functionals_;
  Matrix coeffs_;
};

/// Supported pairs: Lagrange 1..5, Hermite 3, Morley 2, Argyris 5, Bell 5.
/// A degree of 0 selects the family's natural degree for the fixed-degree
/// families.
ReferenceElement build_reference_element(Family family, int degree = 0);

/// Derivatives of every basis function at a set of reference points.
struct Tabulation {
  int max_order = 0;
  Matrix points;
  // values[derivative_index(kx, ky)](j, q): derivative of basis j at point q.
  std::vector<Matrix> values;

  const Matrix& derivative(int kx, int ky) const { return values[derivative_index(kx, ky)]; }
  /// Jet of basis function j at point q; requires max_order >= 2.
  Jet jet(int j, Eigen::Index q) const;
};

/// max_order must be at most 2.
Tabulation tabulate(const ReferenceElement& element, const Matrix& points, int max_order);

/// Same as tabulate but includes third derivatives, which the clamped-plate
/// and interior-penalty boundary terms need.
Tabulation tabulate_third(const ReferenceElement& element, const Matrix& points);

/// Matrix with entry (i, m) = functional i applied to PolyBasis member m.
Matrix functional_matrix(const std::vector<NodalFunctional>& functionals, const PolyBasis& poly);

/// CSV dump of coeffs(): one row per basis function, 17 significant digits.
void write_coeffs_csv(std::ostream& out, const ReferenceElement& element);

}  // namespace c1fem
