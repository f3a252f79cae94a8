#pragma once

#include "c1fem/mesh.hpp"
#include "c1fem/refelem.hpp"

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace c1fem {

/// Physical nodal basis in terms of pulled-back reference basis functions:
///   psi_i = sum_j M(i, j) F^*(psihat_j).
/// M is square except for Bell, where the reference side is the Argyris basis.
struct TransformMatrix {
  Matrix M;
  Family family = Family::Lagrange;
  /// Diagonal of the derivative scaling applied to M (all ones if unscaled).
  Vector scaling;
};

/// Factors of V = E * VC * D (and M = V^T).  D maps the element's nodes to
/// the extended node set, VC maps pushed-forward extended physical nodes to
/// extended reference nodes and E selects the reference element's nodes.
struct ThreeStepFactors {
  Matrix D;
  Matrix VC;
  Matrix E;
  std::array<Eigen::Matrix2d, 3> B;

  Matrix V() const { return E * VC * D; }
};

/// B^i = Ghat_i J^{-T} G_i^T with G_i = [n_i t_i]^T.
Eigen::Matrix2d edge_frame_block(const CellGeometry& geom, int edge);

/// Maps Voigt (xx, xy, yy) physical second derivatives of F^*(f) to the
/// reference second derivatives of f.
Eigen::Matrix3d hessian_block(const Eigen::Matrix2d& J);

TransformMatrix hermite_M(const CellGeometry& geom);
TransformMatrix morley_M(const CellGeometry& geom);
ThreeStepFactors morley_factors(const CellGeometry& geom);
TransformMatrix argyris_M(const CellGeometry& geom);
ThreeStepFactors argyris_factors(const CellGeometry& geom);
TransformMatrix bell_M(const CellGeometry& geom);

/// Rescales derivative basis functions to the size of the value basis
/// functions: rows for first (second) vertex derivatives are divided by h(v)
/// (h(v)^2), edge normal derivatives by the edge length.  The matching DoFs
/// become h * du, h^2 * d2u and l * du/dn.  Value rows are unchanged.
TransformMatrix scale_M(const TransformMatrix& transform, const CellGeometry& geom);

/// A finite element family together with everything needed to map it to
/// physical cells.
class MappedElement {
 public:
  MappedElement(Family family, int degree = 0);

  Family family() const { return nodal_->family(); }
  int degree() const { return nodal_->degree(); }
  int size() const { return nodal_->size(); }
  std::string name() const { return nodal_->name(); }

  /// The element's own reference nodal basis.
  const ReferenceElement& nodal() const { return *nodal_; }
  /// The reference basis whose pullbacks M combines (Argyris for Bell).
  const ReferenceElement& reference_basis() const { return *basis_; }

  TransformMatrix transform(const CellGeometry& geom, bool scaled) const;

  /// Nodal functionals of the physical element on the given cell.  Edge
  /// normal derivatives use the cell's outward normal.
  std::vector<NodalFunctional> physical_functionals(const CellGeometry& geom) const;

  /// Whether the physical basis is in H^1 (continuous across edges).
  bool h1_conforming() const { return family() != Family::Morley; }

 private:
  std::shared_ptr<const ReferenceElement> nodal_;
  std::shared_ptr<const ReferenceElement> basis_;
};

/// Jet of the pullback F^*(psihat_j) at the point of tabulation column q.
Jet pullback_jet(const Tabulation& tab, int j, Eigen::Index q, const CellGeometry& geom);

/// CSV dump of M with 17 significant digits.
void write_transform_csv(std::ostream& out, const TransformMatrix& transform);

}  // namespace c1fem
