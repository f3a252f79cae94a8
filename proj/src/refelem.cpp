#include "c1fem/refelem.hpp"

#include "c1fem/quadrature.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace c1fem {

std::string to_string(Family family) {
  switch (family) {
    case Family::Lagrange: return "Lagrange";
    case Family::Hermite: return "Hermite";
    case Family::Morley: return "Morley";
    case Family::Argyris: return "Argyris";
    case Family::Bell: return "Bell";
  }
  return "unknown";
}

double NodalFunctional::apply(const Jet& f) const {
  switch (kind) {
    case FunctionalKind::PointEval: return f.value;
    case FunctionalKind::PointDeriv:
    case FunctionalKind::EdgeNormalDeriv: return f.grad.dot(direction);
    case FunctionalKind::PointSecondDeriv:
      switch (component) {
        case HessianComponent::xx: return f.hess(0, 0);
        case HessianComponent::xy: return f.hess(0, 1);
        case HessianComponent::yy: return f.hess(1, 1);
      }
  }
  return 0.0;
}

namespace reference_cell {

Point vertex(int i) {
  switch (i) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    case 2: return {0.0, 1.0};
  }
  throw Error("reference_cell::vertex: index out of range");
}

std::array<int, 2> edge_vertices(int edge) {
  switch (edge) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    case 2: return {0, 1};
  }
  throw Error("reference_cell::edge_vertices: index out of range");
}

Point edge_midpoint(int edge) {
  const auto [a, b] = edge_vertices(edge);
  return 0.5 * (vertex(a) + vertex(b));
}

Eigen::Vector2d edge_tangent(int edge) {
  const auto [a, b] = edge_vertices(edge);
  return (vertex(b) - vertex(a)).normalized();
}

Eigen::Vector2d edge_normal(int edge) {
  const Eigen::Vector2d t = edge_tangent(edge);
  Eigen::Vector2d n(t.y(), -t.x());
  if (n.dot(edge_midpoint(edge) - vertex(edge)) < 0.0) n = -n;
  return n;
}

double edge_length(int edge) {
  const auto [a, b] = edge_vertices(edge);
  return (vertex(b) - vertex(a)).norm();
}

}  // namespace reference_cell

ReferenceElement::ReferenceElement(Family family, int degree,
                                   std::vector<NodalFunctional> functionals, Matrix coeffs)
    : family_(family),
      degree_(degree),
      poly_(degree),
      functionals_(std::move(functionals)),
      coeffs_(std::move(coeffs)) {}

std::string ReferenceElement::name() const {
  if (family_ == Family::Lagrange) return "Lagrange" + std::to_string(degree_);
  return to_string(family_);
}

Jet Tabulation::jet(int j, Eigen::Index q) const {
  if (max_order < 2) throw Error("Tabulation::jet needs second derivatives");
  Jet f;
  f.value = derivative(0, 0)(j, q);
  f.grad = {derivative(1, 0)(j, q), derivative(0, 1)(j, q)};
  f.hess << derivative(2, 0)(j, q), derivative(1, 1)(j, q), derivative(1, 1)(j, q),
      derivative(0, 2)(j, q);
  return f;
}

Matrix functional_matrix(const std::vector<NodalFunctional>& functionals, const PolyBasis& poly) {
  const int m = poly.dimension();
  Matrix points(static_cast<Eigen::Index>(functionals.size()), 2);
  for (std::size_t i = 0; i < functionals.size(); ++i) points.row(i) = functionals[i].point;
  const std::vector<Matrix> tables = poly.tabulate(2, points);

  Matrix result(static_cast<Eigen::Index>(functionals.size()), m);
  for (std::size_t i = 0; i < functionals.size(); ++i) {
    for (int k = 0; k < m; ++k) {
      Jet f;
      f.value = tables[derivative_index(0, 0)](i, k);
      f.grad = {tables[derivative_index(1, 0)](i, k), tables[derivative_index(0, 1)](i, k)};
      const double hxy = tables[derivative_index(1, 1)](i, k);
      f.hess << tables[derivative_index(2, 0)](i, k), hxy, hxy, tables[derivative_index(0, 2)](i, k);
      result(i, k) = functionals[i].apply(f);
    }
  }
  return result;
}

namespace {

NodalFunctional point_eval(const Point& x, Entity entity) {
  NodalFunctional n;
  n.kind = FunctionalKind::PointEval;
  n.point = x;
  n.entity = entity;
  return n;
}

NodalFunctional point_deriv(const Point& x, const Eigen::Vector2d& dir, Entity entity) {
  NodalFunctional n;
  n.kind = FunctionalKind::PointDeriv;
  n.point = x;
  n.direction = dir;
  n.entity = entity;
  return n;
}

NodalFunctional second_deriv(const Point& x, HessianComponent c, Entity entity) {
  NodalFunctional n;
  n.kind = FunctionalKind::PointSecondDeriv;
  n.point = x;
  n.component = c;
  n.entity = entity;
  return n;
}

NodalFunctional edge_normal_deriv(int edge) {
  NodalFunctional n;
  n.kind = FunctionalKind::EdgeNormalDeriv;
  n.point = reference_cell::edge_midpoint(edge);
  n.direction = reference_cell::edge_normal(edge);
  n.entity = {1, edge};
  n.edge = edge;
  return n;
}

// Per-vertex [value, dx, dy] or [value, dx, dy, dxx, dxy, dyy] blocks.
void add_vertex_blocks(std::vector<NodalFunctional>& out, bool second) {
  for (int v = 0; v < 3; ++v) {
    const Point x = reference_cell::vertex(v);
    const Entity e{0, v};
    out.push_back(point_eval(x, e));
    out.push_back(point_deriv(x, {1.0, 0.0}, e));
    out.push_back(point_deriv(x, {0.0, 1.0}, e));
    if (second) {
      out.push_back(second_deriv(x, HessianComponent::xx, e));
      out.push_back(second_deriv(x, HessianComponent::xy, e));
      out.push_back(second_deriv(x, HessianComponent::yy, e));
    }
  }
}

std::vector<NodalFunctional> lagrange_functionals(int k) {
  std::vector<NodalFunctional> out;
  for (int v = 0; v < 3; ++v) out.push_back(point_eval(reference_cell::vertex(v), {0, v}));
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = reference_cell::edge_vertices(e);
    const Point pa = reference_cell::vertex(a);
    const Point pb = reference_cell::vertex(b);
    for (int m = 1; m < k; ++m) out.push_back(point_eval(pa + (double(m) / k) * (pb - pa), {1, e}));
  }
  for (int j = 1; j < k; ++j) {
    for (int i = 1; i + j < k; ++i) out.push_back(point_eval({double(i) / k, double(j) / k}, {2, 0}));
  }
  return out;
}

// Rows enforcing that the normal derivative along each edge has no quartic
// Legendre component.
Matrix quartic_normal_mode_rows(const PolyBasis& poly) {
  const QuadRule rule = interval_rule(9);
  Matrix rows = Matrix::Zero(3, poly.dimension());
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = reference_cell::edge_vertices(e);
    const Point pa = reference_cell::vertex(a);
    const Point pb = reference_cell::vertex(b);
    const Eigen::Vector2d n = reference_cell::edge_normal(e);
    Matrix pts(rule.size(), 2);
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      pts.row(q) = pa + rule.points(q, 0) * (pb - pa);
    }
    const std::vector<Matrix> t = poly.tabulate(1, pts);
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      const double x = 2.0 * rule.points(q, 0) - 1.0;
      const double legendre4 = (35.0 * std::pow(x, 4) - 30.0 * x * x + 3.0) / 8.0;
      rows.row(e) += rule.weights(q) * legendre4 *
                     (n.x() * t[derivative_index(1, 0)].row(q) + n.y() * t[derivative_index(0, 1)].row(q));
    }
  }
  return rows;
}

}  // namespace

ReferenceElement build_reference_element(Family family, int degree) {
  std::vector<NodalFunctional> functionals;
  int embedded = 0;
  switch (family) {
    case Family::Lagrange:
      if (degree < 1 || degree > 5) throw Error("Lagrange degree must be in [1, 5]");
      embedded = degree;
      functionals = lagrange_functionals(degree);
      break;
    case Family::Hermite:
      embedded = 3;
      add_vertex_blocks(functionals, false);
      functionals.push_back(point_eval({1.0 / 3.0, 1.0 / 3.0}, {2, 0}));
      break;
    case Family::Morley:
      embedded = 2;
      for (int v = 0; v < 3; ++v) functionals.push_back(point_eval(reference_cell::vertex(v), {0, v}));
      for (int e = 0; e < 3; ++e) functionals.push_back(edge_normal_deriv(e));
      break;
    case Family::Argyris:
      embedded = 5;
      add_vertex_blocks(functionals, true);
      for (int e = 0; e < 3; ++e) functionals.push_back(edge_normal_deriv(e));
      break;
    case Family::Bell:
      embedded = 5;
      add_vertex_blocks(functionals, true);
      break;
  }
  if (family != Family::Lagrange && degree != 0 && degree != embedded) {
    throw Error(to_string(family) + " element only exists in degree " + std::to_string(embedded));
  }

  const PolyBasis poly(embedded);
  Matrix vandermonde = functional_matrix(functionals, poly);
  if (family == Family::Bell) {
    Matrix augmented(poly.dimension(), poly.dimension());
    augmented << vandermonde, quartic_normal_mode_rows(poly);
    vandermonde = std::move(augmented);
  }
  if (vandermonde.rows() != vandermonde.cols()) {
    throw Error("functional set of " + to_string(family) + " does not match the polynomial space");
  }

  Eigen::JacobiSVD<Matrix> svd(vandermonde);
  const Vector& sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-12 * sv(0)) {
    throw Error("generalized Vandermonde matrix of " + to_string(family) + " is singular");
  }
  // Basis functions are the columns of V^{-1}; store them as rows.
  const Matrix inverse = vandermonde.partialPivLu().inverse();
  Matrix coeffs = inverse.transpose().topRows(static_cast<Eigen::Index>(functionals.size()));
  return ReferenceElement(family, embedded, std::move(functionals), std::move(coeffs));
}

namespace {

Tabulation tabulate_impl(const ReferenceElement& element, const Matrix& points, int max_order) {
  if (points.cols() != 2) throw Error("tabulate: points must have two columns");
  Tabulation tab;
  tab.max_order = max_order;
  tab.points = points;
  const std::vector<Matrix> tables = element.poly().tabulate(max_order, points);
  tab.values.reserve(tables.size());
  for (const Matrix& t : tables) tab.values.push_back(element.coeffs() * t.transpose());
  return tab;
}

}  // namespace

Tabulation tabulate(const ReferenceElement& element, const Matrix& points, int max_order) {
  if (max_order < 0 || max_order > 2) {
    throw Error("tabulate: derivative order " + std::to_string(max_order) + " unsupported");
  }
  return tabulate_impl(element, points, max_order);
}

Tabulation tabulate_third(const ReferenceElement& element, const Matrix& points) {
  return tabulate_impl(element, points, 3);
}

void write_coeffs_csv(std::ostream& out, const ReferenceElement& element) {
  out << std::setprecision(17);
  const Matrix& c = element.coeffs();
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (j > 0) out << ',';
      out << c(i, j);
    }
    out << '\n';
  }
}

}  // namespace c1fem
