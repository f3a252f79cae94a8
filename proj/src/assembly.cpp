#include "c1fem/assembly.hpp"

#include "c1fem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <ostream>

namespace c1fem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double, int>>;

// Directional derivative sum_a d_a D_a of a table set.
Matrix directional(const std::vector<Matrix>& D, const Eigen::Vector2d& d) {
  return d.x() * D[derivative_index(1, 0)] + d.y() * D[derivative_index(0, 1)];
}

Matrix second_directional(const std::vector<Matrix>& D, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.x() * D[derivative_index(2, 0)] + (a.x() * b.y() + a.y() * b.x()) * D[derivative_index(1, 1)] +
         a.y() * b.y() * D[derivative_index(0, 2)];
}

Matrix laplacian(const std::vector<Matrix>& D) { return D[derivative_index(2, 0)] + D[derivative_index(0, 2)]; }

// Sum over a third derivative tensor contracted with a, b, c.
Matrix third_directional(const std::vector<Matrix>& D, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Eigen::Vector2d& c) {
  Matrix out = Matrix::Zero(D[0].rows(), D[0].cols());
  for (int mask = 0; mask < 8; ++mask) {
    const int i = mask & 1, j = (mask >> 1) & 1, k = (mask >> 2) & 1;
    const double w = a(i) * b(j) * c(k);
    const int ky = i + j + k;
    if (w != 0.0) out += w * D[derivative_index(3 - ky, ky)];
  }
  return out;
}

// sum_q w_q a(:, q) b(:, q)^T
Matrix weighted(const Matrix& a, const Vector& w, const Matrix& b) { return a * w.asDiagonal() * b.transpose(); }

void scatter(Triplets& out, const DofMap& dm, const std::vector<int>& cells, const Matrix& A) {
  std::vector<int> g, s;
  for (int c : cells) {
    g.insert(g.end(), dm.cell_dofs(c), dm.cell_dofs(c) + dm.dofs_per_cell);
    s.insert(s.end(), dm.cell_signs(c), dm.cell_signs(c) + dm.dofs_per_cell);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) out.emplace_back(g[i], g[j], s[i] * s[j] * A(i, j));
  }
}

Matrix congruence(const std::vector<const Matrix*>& Ms, const Matrix& Atilde) {
  Eigen::Index rows = 0, cols = 0;
  for (const Matrix* M : Ms) {
    rows += M->rows();
    cols += M->cols();
  }
  Matrix big = Matrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const Matrix* M : Ms) {
    big.block(r, c, M->rows(), M->cols()) = *M;
    r += M->rows();
    c += M->cols();
  }
  return big * Atilde * big.transpose();
}

// Quadrature on a physical edge, mapped into the reference coordinates of a cell.
struct EdgeQuadrature {
  std::vector<Point> physical;
  Vector weights;
};

EdgeQuadrature edge_quadrature(const Point& a, const Point& b, int degree) {
  const QuadRule rule = interval_rule(degree);
  EdgeQuadrature q;
  q.weights = rule.weights * (b - a).norm();
  for (Eigen::Index i = 0; i < rule.size(); ++i) q.physical.push_back(a + rule.points(i, 0) * (b - a));
  return q;
}

std::vector<Matrix> traces(const FunctionSpace& space, int cell, const EdgeQuadrature& q, int order) {
  const CellGeometry& g = space.geometry(cell);
  Matrix pts(static_cast<Eigen::Index>(q.physical.size()), 2);
  for (std::size_t i = 0; i < q.physical.size(); ++i) pts.row(i) = g.to_reference(q.physical[i]);
  const ReferenceElement& ref = space.element().reference_basis();
  const Tabulation tab = order > 2 ? tabulate_third(ref, pts) : tabulate(ref, pts, order);
  return physical_derivatives(tab, g.J, order);
}

int default_degree(int requested, const MappedElement& element) {
  return requested > 0 ? requested : std::min(2 * element.degree(), kMaxQuadratureDegree);
}

// Clamped-plate Nitsche boundary terms with bending coefficient c = 1 - nu
// (c = 0 for the interior penalty form).
Matrix clamped_boundary(const std::vector<Matrix>& D, const Vector& w, const Eigen::Vector2d& n,
                        const Eigen::Vector2d& t, double length, double c, double beta1, double beta2) {
  const Matrix& V = D[0];
  const Matrix Un = directional(D, n);
  const Matrix Mu = laplacian(D) - c * second_directional(D, t, t);
  const Matrix Vu = third_directional(D, n, Eigen::Vector2d::UnitX(), Eigen::Vector2d::UnitX()) +
                    third_directional(D, n, Eigen::Vector2d::UnitY(), Eigen::Vector2d::UnitY()) +
                    c * third_directional(D, n, t, t);
  Matrix A = -weighted(Mu, w, Un);
  A += A.transpose().eval();
  Matrix B = weighted(Vu, w, V);
  A += B + B.transpose();
  A += beta2 / length * weighted(Un, w, Un) + beta1 / (length * length * length) * weighted(V, w, V);
  return A;
}

}  // namespace

Eigen::Vector2d global_edge_normal(const TriangleMesh& mesh, int edge) {
  const Eigen::Vector2d d = mesh.vertices[mesh.edges[edge][1]] - mesh.vertices[mesh.edges[edge][0]];
  return Eigen::Vector2d(-d.y(), d.x()) / d.norm();
}

DofMap build_dof_map(const TriangleMesh& mesh, const MappedElement& element) {
  const auto& functionals = element.nodal().functionals();
  std::array<int, 3> per_entity{0, 0, 0};
  std::vector<int> position(functionals.size());
  std::map<std::pair<int, int>, int> seen;
  for (std::size_t i = 0; i < functionals.size(); ++i) {
    const Entity& e = functionals[i].entity;
    position[i] = seen[{e.dim, e.index}]++;
  }
  for (const auto& [key, count] : seen) per_entity[key.first] = std::max(per_entity[key.first], count);

  DofMap dm;
  dm.dofs_per_cell = element.size();
  const int edge_offset = mesh.num_vertices() * per_entity[0];
  const int cell_offset = edge_offset + mesh.num_edges() * per_entity[1];
  dm.total_dofs = cell_offset + mesh.num_cells() * per_entity[2];
  dm.index.resize(std::size_t(mesh.num_cells()) * dm.dofs_per_cell);
  dm.sign.assign(dm.index.size(), 1);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom = cell_geometry({mesh.vertices[mesh.cells[c][0]], mesh.vertices[mesh.cells[c][1]],
                                             mesh.vertices[mesh.cells[c][2]]});
    int* idx = dm.index.data() + std::size_t(c) * dm.dofs_per_cell;
    int* sgn = dm.sign.data() + std::size_t(c) * dm.dofs_per_cell;
    for (std::size_t i = 0; i < functionals.size(); ++i) {
      const NodalFunctional& f = functionals[i];
      const int k = position[i];
      switch (f.entity.dim) {
        case 0: idx[i] = mesh.cells[c][f.entity.index] * per_entity[0] + k; break;
        case 1: {
          const CellEdge ce = mesh.cell_edges[c][f.entity.index];
          const int kk = ce.sign > 0 ? k : per_entity[1] - 1 - k;
          idx[i] = edge_offset + ce.edge * per_entity[1] + kk;
          if (f.kind == FunctionalKind::EdgeNormalDeriv) {
            sgn[i] = geom.normals[f.entity.index].dot(global_edge_normal(mesh, ce.edge)) > 0 ? 1 : -1;
          }
          break;
        }
        default: idx[i] = cell_offset + c * per_entity[2] + k; break;
      }
    }
  }
  return dm;
}

FormSpec FormSpec::poisson_nitsche(double alpha) {
  FormSpec f;
  f.kind = FormKind::PoissonNitsche;
  f.alpha = alpha;
  return f;
}

FormSpec FormSpec::plate(double nu) {
  FormSpec f;
  f.kind = FormKind::Plate;
  f.nu = nu;
  return f;
}

FormSpec FormSpec::plate_ip(double alpha) {
  FormSpec f;
  f.kind = FormKind::PlateIP;
  f.alpha = alpha;
  f.beta1 = alpha;
  f.beta2 = alpha;
  return f;
}

FormSpec FormSpec::plate_clamped_nitsche(double nu, double beta1, double beta2) {
  FormSpec f;
  f.kind = FormKind::PlateClampedNitsche;
  f.nu = nu;
  f.beta1 = beta1;
  f.beta2 = beta2;
  return f;
}

void FormSpec::validate() const {
  if ((kind == FormKind::PoissonNitsche || kind == FormKind::PlateIP) && !(alpha > 0)) {
    throw Error("penalty alpha must be positive");
  }
  if (kind == FormKind::PlateClampedNitsche && !(beta1 > 0 && beta2 > 0)) throw Error("beta1, beta2 must be positive");
  if ((kind == FormKind::Plate || kind == FormKind::PlateClampedNitsche) && !(nu >= 0 && nu <= 0.5)) {
    throw Error("Poisson ratio must lie in [0, 1/2]");
  }
  for (int d : {cell_degree, facet_degree}) {
    if (d > kMaxQuadratureDegree) throw Error("quadrature degree above " + std::to_string(kMaxQuadratureDegree));
  }
}

std::string to_string(FormKind kind) {
  switch (kind) {
    case FormKind::PoissonNitsche: return "PoissonNitsche";
    case FormKind::Plate: return "Plate";
    case FormKind::PlateIP: return "PlateIP";
    case FormKind::PlateClampedNitsche: return "PlateClampedNitsche";
  }
  return "?";
}

double default_poisson_penalty(const MappedElement& element) {
  return 10.0 * element.degree() * element.degree();
}

double default_ip_penalty(int degree) { return degree <= 3 ? 100.0 : 10.0 * std::pow(degree, 4); }

FormSpec default_clamped_plate(const MappedElement& element, double nu) {
  const double p = element.degree();
  return FormSpec::plate_clamped_nitsche(nu, 10.0 * std::pow(p, 4), 10.0 * p * p);
}

bool compatible(FormKind kind, const MappedElement& element) {
  const Family f = element.family();
  switch (kind) {
    case FormKind::PoissonNitsche: return true;
    case FormKind::PlateIP: return f == Family::Lagrange && element.degree() >= 2;
    case FormKind::Plate:
    case FormKind::PlateClampedNitsche: return f == Family::Morley || f == Family::Argyris || f == Family::Bell;
  }
  return false;
}

FunctionSpace::FunctionSpace(TriangleMesh mesh, MappedElement element, bool scaled)
    : mesh_(std::move(mesh)), element_(std::move(element)), scaled_(scaled) {
  dofmap_ = build_dof_map(mesh_, element_);
  const VertexSizeField sizes = vertex_size_field(mesh_);
  geometry_.reserve(mesh_.num_cells());
  transform_.reserve(mesh_.num_cells());
  for (int c = 0; c < mesh_.num_cells(); ++c) {
    geometry_.push_back(cell_geometry(mesh_, c, sizes));
    transform_.push_back(element_.transform(geometry_.back(), scaled_));
  }
}

Vector FunctionSpace::local_coefficients(int c, const Vector& u) const {
  Vector local(dofmap_.dofs_per_cell);
  const int* g = dofmap_.cell_dofs(c);
  const int* s = dofmap_.cell_signs(c);
  for (int i = 0; i < dofmap_.dofs_per_cell; ++i) local(i) = s[i] * u(g[i]);
  return transform_[c].M.transpose() * local;
}

Vector interpolate(const FunctionSpace& space, const JetFunction& f) {
  Vector u = Vector::Zero(space.num_dofs());
  const DofMap& dm = space.dofmap();
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const auto functionals = space.element().physical_functionals(space.geometry(c));
    const Vector& s = space.transform(c).scaling;
    for (int i = 0; i < dm.dofs_per_cell; ++i) {
      u(dm.cell_dofs(c)[i]) = dm.cell_signs(c)[i] * functionals[i].apply(f(functionals[i].point)) / s(i);
    }
  }
  return u;
}

std::vector<Matrix> physical_derivatives(const Tabulation& tab, const Eigen::Matrix2d& J, int order) {
  if (order > tab.max_order) throw Error("tabulation does not hold the requested derivatives");
  std::vector<Matrix> out(derivative_count(order));
  for (int n = 0; n <= order; ++n) {
    for (int ky = 0; ky <= n; ++ky) {
      // Physical multi-index: (n - ky) x-derivatives then ky y-derivatives.
      Matrix acc = Matrix::Zero(tab.values[0].rows(), tab.values[0].cols());
      for (int mask = 0; mask < (1 << n); ++mask) {
        double w = 1.0;
        int ref_ky = 0;
        for (int i = 0; i < n; ++i) {
          const int k = (mask >> i) & 1;
          w *= J(k, i < n - ky ? 0 : 1);
          ref_ky += k;
        }
        if (w != 0.0) acc += w * tab.derivative(n - ref_ky, ref_ky);
      }
      out[derivative_index(n - ky, ky)] = std::move(acc);
    }
  }
  return out;
}

SparseMatrix assemble_operator(const FunctionSpace& space, const FormSpec& form) {
  form.validate();
  const MappedElement& el = space.element();
  if (!compatible(form.kind, el)) throw Error(to_string(form.kind) + " cannot be assembled with " + el.name());
  const TriangleMesh& mesh = space.mesh();
  const DofMap& dm = space.dofmap();
  const int cell_deg = default_degree(form.cell_degree, el);
  const int facet_deg = default_degree(form.facet_degree, el);
  const int needed = std::max(0, 2 * el.degree() - (form.kind == FormKind::PoissonNitsche ? 2 : 4));
  if (cell_deg < needed) {
    std::cerr << "warning: cell quadrature degree " << cell_deg << " below " << needed << " for " << el.name() << '\n';
  }

  Triplets trips;
  trips.reserve(std::size_t(mesh.num_cells()) * dm.dofs_per_cell * dm.dofs_per_cell * 2);

  const QuadRule rule = triangle_rule(cell_deg);
  const int cell_order = form.kind == FormKind::PoissonNitsche ? 1 : 2;
  const Tabulation ref_tab = tabulate(el.reference_basis(), rule.points, cell_order);
  const double c_bend = 1.0 - form.nu;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = space.geometry(c);
    const std::vector<Matrix> D = physical_derivatives(ref_tab, g.J, cell_order);
    const Vector w = rule.weights * g.detJinv_abs;
    Matrix At;
    switch (form.kind) {
      case FormKind::PoissonNitsche:
        At = weighted(D[derivative_index(1, 0)], w, D[derivative_index(1, 0)]) +
             weighted(D[derivative_index(0, 1)], w, D[derivative_index(0, 1)]);
        break;
      case FormKind::PlateIP: {
        const Matrix L = laplacian(D);
        At = weighted(L, w, L);
        break;
      }
      case FormKind::Plate:
      case FormKind::PlateClampedNitsche: {
        const Matrix L = laplacian(D);
        const Matrix& xx = D[derivative_index(2, 0)];
        const Matrix& xy = D[derivative_index(1, 1)];
        const Matrix& yy = D[derivative_index(0, 2)];
        At = weighted(L, w, L) - c_bend * (weighted(xx, w, yy) + weighted(yy, w, xx) - 2.0 * weighted(xy, w, xy));
        break;
      }
    }
    scatter(trips, dm, {c}, congruence({&space.transform(c).M}, At));
  }

  if (form.kind != FormKind::Plate) {
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const Point& a = mesh.vertices[mesh.edges[e][0]];
      const Point& b = mesh.vertices[mesh.edges[e][1]];
      const EdgeQuadrature q = edge_quadrature(a, b, facet_deg);
      const double length = (b - a).norm();
      const int cA = mesh.edge_cells[e][0];
      const CellGeometry& gA = space.geometry(cA);
      const int le = mesh.local_edge(cA, e);
      const Eigen::Vector2d n = gA.normals[le];
      const Eigen::Vector2d t = gA.tangents[le];

      if (mesh.is_boundary_edge(e)) {
        Matrix At;
        if (form.kind == FormKind::PoissonNitsche) {
          const std::vector<Matrix> D = traces(space, cA, q, 1);
          const Matrix Gn = directional(D, n);
          At = -weighted(Gn, q.weights, D[0]);
          At += At.transpose().eval();
          At += form.alpha / length * weighted(D[0], q.weights, D[0]);
        } else if (form.kind == FormKind::PlateClampedNitsche) {
          At = clamped_boundary(traces(space, cA, q, 3), q.weights, n, t, length, c_bend, form.beta1, form.beta2);
        } else {
          At = clamped_boundary(traces(space, cA, q, 3), q.weights, n, t, length, 0.0, form.beta1, form.beta2);
        }
        scatter(trips, dm, {cA}, congruence({&space.transform(cA).M}, At));
      } else if (form.kind == FormKind::PlateIP) {
        const int cB = mesh.edge_cells[e][1];
        const std::vector<Matrix> DA = traces(space, cA, q, 2);
        const std::vector<Matrix> DB = traces(space, cB, q, 2);
        const Eigen::Index nA = DA[0].rows(), nB = DB[0].rows();
        Matrix jump(nA + nB, q.weights.size()), avg(nA + nB, q.weights.size());
        jump << directional(DA, n), directional(DB, -n);
        avg << 0.5 * laplacian(DA), 0.5 * laplacian(DB);
        Matrix At = -weighted(avg, q.weights, jump);
        At += At.transpose().eval();
        At += form.alpha / length * weighted(jump, q.weights, jump);
        scatter(trips, dm, {cA, cB}, congruence({&space.transform(cA).M, &space.transform(cB).M}, At));
      }
    }
  }

  SparseMatrix A(dm.total_dofs, dm.total_dofs);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

SparseMatrix assemble_operator(const TriangleMesh& mesh, const MappedElement& element, const FormSpec& form,
                               bool scaled) {
  return assemble_operator(FunctionSpace(mesh, element, scaled), form);
}

Vector assemble_load(const FunctionSpace& space, const ScalarFunction& f) {
  const MappedElement& el = space.element();
  const DofMap& dm = space.dofmap();
  const QuadRule rule = triangle_rule(std::min(2 * el.degree() + 2, kMaxQuadratureDegree));
  const Tabulation tab = tabulate(el.reference_basis(), rule.points, 0);
  const Matrix& V = tab.derivative(0, 0);
  Vector b = Vector::Zero(dm.total_dofs);
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const CellGeometry& g = space.geometry(c);
    Vector fw(rule.size());
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      fw(q) = f(g.to_physical(rule.points.row(q).transpose())) * rule.weights(q) * g.detJinv_abs;
    }
    const Vector local = space.transform(c).M * (V * fw);
    for (int i = 0; i < dm.dofs_per_cell; ++i) b(dm.cell_dofs(c)[i]) += dm.cell_signs(c)[i] * local(i);
  }
  return b;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& A) {
  std::size_t entries = 0;
  for (int i = 0; i < A.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(A, i); it; ++it) entries += it.col() <= i;
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << A.rows() << ' ' << A.cols() << ' ' << entries << '\n' << std::setprecision(17);
  for (int i = 0; i < A.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(A, i); it; ++it) {
      if (it.col() <= i) out << i + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

void write_vector(std::ostream& out, const Vector& v) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v(i) << '\n';
}

}  // namespace c1fem
