#include "c1fem/transform.hpp"

#include <iomanip>
#include <ostream>

namespace c1fem {

namespace {

constexpr std::array<std::array<int, 2>, 3> kEdgeEnds{{{1, 2}, {0, 2}, {0, 1}}};

// Voigt coefficients of t^T H s for symmetric H: (xx, xy, yy).
Eigen::RowVector3d bilinear_voigt(const Eigen::Vector2d& t, const Eigen::Vector2d& s) {
  return {t.x() * s.x(), t.x() * s.y() + t.y() * s.x(), t.y() * s.y()};
}

TransformMatrix with_unit_scaling(Matrix M, Family family) {
  TransformMatrix t;
  t.scaling = Vector::Ones(M.rows());
  t.M = std::move(M);
  t.family = family;
  return t;
}

}  // namespace

Eigen::Matrix2d edge_frame_block(const CellGeometry& geom, int edge) {
  Eigen::Matrix2d ghat;
  ghat.row(0) = reference_cell::edge_normal(edge).transpose();
  ghat.row(1) = reference_cell::edge_tangent(edge).transpose();
  Eigen::Matrix2d g;
  g.row(0) = geom.normals[edge].transpose();
  g.row(1) = geom.tangents[edge].transpose();
  return ghat * geom.Jinv.transpose() * g.transpose();
}

Eigen::Matrix3d hessian_block(const Eigen::Matrix2d& J) {
  const Eigen::Matrix2d Jinv = J.inverse();
  Eigen::Matrix3d theta;
  const std::array<Eigen::Matrix2d, 3> unit{
      (Eigen::Matrix2d() << 1, 0, 0, 0).finished(),
      (Eigen::Matrix2d() << 0, 1, 1, 0).finished(),
      (Eigen::Matrix2d() << 0, 0, 0, 1).finished()};
  for (int k = 0; k < 3; ++k) {
    const Eigen::Matrix2d h = Jinv.transpose() * unit[k] * Jinv;
    theta.col(k) << h(0, 0), h(0, 1), h(1, 1);
  }
  return theta;
}

TransformMatrix hermite_M(const CellGeometry& geom) {
  Matrix M = Matrix::Identity(10, 10);
  for (int v = 0; v < 3; ++v) M.block<2, 2>(3 * v + 1, 3 * v + 1) = geom.Jinv;
  return with_unit_scaling(std::move(M), Family::Hermite);
}

TransformMatrix morley_M(const CellGeometry& geom) {
  Matrix V = Matrix::Identity(6, 6);
  for (int e = 0; e < 3; ++e) {
    const Eigen::Matrix2d B = edge_frame_block(geom, e);
    const auto [a, b] = kEdgeEnds[e];
    V(3 + e, a) = -B(0, 1) / geom.edge_lengths[e];
    V(3 + e, b) = B(0, 1) / geom.edge_lengths[e];
    V(3 + e, 3 + e) = B(0, 0);
  }
  return with_unit_scaling(V.transpose(), Family::Morley);
}

ThreeStepFactors morley_factors(const CellGeometry& geom) {
  // Extended nodes: 3 vertex values, then (normal, tangential) pairs per edge.
  ThreeStepFactors f;
  f.D = Matrix::Zero(9, 6);
  f.VC = Matrix::Zero(9, 9);
  f.E = Matrix::Zero(6, 9);
  for (int v = 0; v < 3; ++v) {
    f.D(v, v) = 1.0;
    f.VC(v, v) = 1.0;
    f.E(v, v) = 1.0;
  }
  for (int e = 0; e < 3; ++e) {
    const int n = 3 + 2 * e;
    const auto [a, b] = kEdgeEnds[e];
    f.D(n, 3 + e) = 1.0;
    // Tangential derivative of a quadratic at the midpoint is a difference quotient.
    f.D(n + 1, a) = -1.0 / geom.edge_lengths[e];
    f.D(n + 1, b) = 1.0 / geom.edge_lengths[e];
    f.B[e] = edge_frame_block(geom, e);
    f.VC.block<2, 2>(n, n) = f.B[e];
    f.E(3 + e, n) = 1.0;
  }
  return f;
}

ThreeStepFactors argyris_factors(const CellGeometry& geom) {
  // Extended nodes: 18 vertex nodes, then (normal, tangential) pairs per edge.
  ThreeStepFactors f;
  f.D = Matrix::Zero(24, 21);
  f.VC = Matrix::Zero(24, 24);
  f.E = Matrix::Zero(21, 24);
  const Eigen::Matrix3d theta = hessian_block(geom.J);
  for (int v = 0; v < 3; ++v) {
    const int o = 6 * v;
    f.VC(o, o) = 1.0;
    f.VC.block<2, 2>(o + 1, o + 1) = geom.Jinv.transpose();
    f.VC.block<3, 3>(o + 3, o + 3) = theta;
  }
  f.D.topLeftCorner(18, 18).setIdentity();
  f.E.topLeftCorner(18, 18).setIdentity();
  for (int e = 0; e < 3; ++e) {
    const int n = 18 + 2 * e;
    const auto [a, b] = kEdgeEnds[e];
    const double l = geom.edge_lengths[e];
    const Eigen::Vector2d& t = geom.tangents[e];
    f.D(n, 18 + e) = 1.0;
    // Midpoint slope of the quintic interpolating value, slope and curvature
    // at both edge ends (s in [0,1]):
    //   p'(1/2) = 15/8 (p1 - p0) - 7/16 (p0' + p1') + 1/32 (p1'' - p0'').
    const int row = n + 1;
    f.D(row, 6 * a) = -15.0 / (8.0 * l);
    f.D(row, 6 * b) = 15.0 / (8.0 * l);
    f.D.block<1, 2>(row, 6 * a + 1) = -7.0 / 16.0 * t.transpose();
    f.D.block<1, 2>(row, 6 * b + 1) = -7.0 / 16.0 * t.transpose();
    f.D.block<1, 3>(row, 6 * a + 3) = -l / 32.0 * bilinear_voigt(t, t);
    f.D.block<1, 3>(row, 6 * b + 3) = l / 32.0 * bilinear_voigt(t, t);
    f.B[e] = edge_frame_block(geom, e);
    f.VC.block<2, 2>(n, n) = f.B[e];
    f.E(18 + e, n) = 1.0;
  }
  return f;
}

TransformMatrix argyris_M(const CellGeometry& geom) {
  return with_unit_scaling(argyris_factors(geom).V().transpose(), Family::Argyris);
}

TransformMatrix bell_M(const CellGeometry& geom) {
  // Bell basis functions are Argyris basis functions plus the edge-normal
  // basis functions weighted so each edge normal derivative is the cubic
  // Hermite interpolant of its vertex data.
  Matrix R = Matrix::Zero(18, 21);
  R.leftCols(18).setIdentity();
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = kEdgeEnds[e];
    const double l = geom.edge_lengths[e];
    const Eigen::Vector2d& n = geom.normals[e];
    const Eigen::Vector2d& t = geom.tangents[e];
    R.block<2, 1>(6 * a + 1, 18 + e) = 0.5 * n;
    R.block<2, 1>(6 * b + 1, 18 + e) = 0.5 * n;
    R.block<3, 1>(6 * a + 3, 18 + e) = l / 8.0 * bilinear_voigt(n, t).transpose();
    R.block<3, 1>(6 * b + 3, 18 + e) = -l / 8.0 * bilinear_voigt(n, t).transpose();
  }
  return with_unit_scaling(R * argyris_M(geom).M, Family::Bell);
}

TransformMatrix scale_M(const TransformMatrix& transform, const CellGeometry& geom) {
  const Eigen::Index n = transform.M.rows();
  Vector s = Vector::Ones(n);
  auto vertex_blocks = [&](int block, bool second) {
    for (int v = 0; v < 3; ++v) {
      const double h = geom.vertex_h[v];
      s(block * v + 1) = s(block * v + 2) = 1.0 / h;
      if (second) s(block * v + 3) = s(block * v + 4) = s(block * v + 5) = 1.0 / (h * h);
    }
  };
  switch (transform.family) {
    case Family::Lagrange: break;
    case Family::Hermite: vertex_blocks(3, false); break;
    case Family::Morley:
      for (int e = 0; e < 3; ++e) s(3 + e) = 1.0 / geom.edge_lengths[e];
      break;
    case Family::Argyris:
      vertex_blocks(6, true);
      for (int e = 0; e < 3; ++e) s(18 + e) = 1.0 / geom.edge_lengths[e];
      break;
    case Family::Bell: vertex_blocks(6, true); break;
  }
  TransformMatrix scaled;
  scaled.family = transform.family;
  scaled.M = s.asDiagonal() * transform.M;
  scaled.scaling = s.cwiseProduct(transform.scaling);
  return scaled;
}

MappedElement::MappedElement(Family family, int degree)
    : nodal_(std::make_shared<const ReferenceElement>(build_reference_element(family, degree))),
      basis_(family == Family::Bell
                 ? std::make_shared<const ReferenceElement>(build_reference_element(Family::Argyris))
                 : nodal_) {}

TransformMatrix MappedElement::transform(const CellGeometry& geom, bool scaled) const {
  TransformMatrix t;
  switch (family()) {
    case Family::Lagrange: t = with_unit_scaling(Matrix::Identity(size(), size()), Family::Lagrange); break;
    case Family::Hermite: t = hermite_M(geom); break;
    case Family::Morley: t = morley_M(geom); break;
    case Family::Argyris: t = argyris_M(geom); break;
    case Family::Bell: t = bell_M(geom); break;
  }
  return scaled ? scale_M(t, geom) : t;
}

std::vector<NodalFunctional> MappedElement::physical_functionals(const CellGeometry& geom) const {
  std::vector<NodalFunctional> out = nodal_->functionals();
  for (NodalFunctional& n : out) {
    n.point = geom.to_physical(n.point);
    if (n.kind == FunctionalKind::EdgeNormalDeriv) n.direction = geom.normals[n.edge];
  }
  return out;
}

Jet pullback_jet(const Tabulation& tab, int j, Eigen::Index q, const CellGeometry& geom) {
  Jet ref = tab.jet(j, q);
  Jet phys;
  phys.value = ref.value;
  phys.grad = geom.J.transpose() * ref.grad;
  phys.hess = geom.J.transpose() * ref.hess * geom.J;
  return phys;
}

void write_transform_csv(std::ostream& out, const TransformMatrix& transform) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < transform.M.rows(); ++i) {
    for (Eigen::Index j = 0; j < transform.M.cols(); ++j) {
      if (j > 0) out << ',';
      out << transform.M(i, j);
    }
    out << '\n';
  }
}

}  // namespace c1fem
