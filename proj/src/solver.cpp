#include "c1fem/solver.hpp"

#include "c1fem/quadrature.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>

namespace c1fem {

namespace {

using ColMajorSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

double relative_residual(const auto& A, const Vector& x, const Vector& b) {
  const double nb = b.norm();
  const double nr = (b - A * x).norm();
  return nb > 0 ? nr / nb : nr;
}

// One residual-correction step; kept only if it does not increase the residual.
template <typename Op, typename Solve>
void refine(const Op& A, const Vector& b, const Solve& solve, SolveReport& report) {
  const Vector correction = solve(Vector(b - A * report.x));
  const Vector candidate = report.x + correction;
  const double r = relative_residual(A, candidate, b);
  if (r <= report.residual) {
    report.x = candidate;
    report.residual = r;
  }
  report.refined = true;
}

Vector start_vector(int n) {
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(1.3 * i + 0.7);
  return x.normalized();
}

// Largest eigenvalue of the SPD operator `apply` by power iteration on the
// Rayleigh quotient.
template <typename Apply>
double power_iteration(int n, const Apply& apply) {
  constexpr double kTol = 1e-9;
  constexpr int kMaxIter = 50000;
  Vector x = start_vector(n);
  double lambda = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    const Vector y = apply(x);
    const double next = x.dot(y);
    const double ny = y.norm();
    if (!(ny > 0)) throw SolverError("power iteration hit the null space");
    x = y / ny;
    if (it > 0 && std::abs(next - lambda) <= kTol * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

// `op` is the operator used for residuals and refinement (dense or sparse).
template <typename Op>
SolveReport dense_lu_impl(const Matrix& A, const Op& op, const Vector& b, bool refine_step) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw Error("dense_lu_solve: dimension mismatch");
  SolveReport report;
  if (A.rows() == 0) return report;
  const Eigen::PartialPivLU<Matrix> lu(A);
  const double amax = A.cwiseAbs().maxCoeff();
  const Matrix U = lu.matrixLU().triangularView<Eigen::Upper>();
  const double umin = U.diagonal().cwiseAbs().minCoeff();
  if (!(umin > A.rows() * std::numeric_limits<double>::epsilon() * amax)) {
    throw SolverError("matrix is singular to working precision");
  }
  report.pivot_growth = U.cwiseAbs().maxCoeff() / amax;
  report.x = lu.solve(b);
  report.residual = relative_residual(op, report.x, b);
  if (refine_step) refine(op, b, [&](const Vector& r) { return Vector(lu.solve(r)); }, report);
  return report;
}

void check_dense_limit(Eigen::Index n) {
  if (n > kDenseLuLimit) throw SolverError("dense LU limited to " + std::to_string(kDenseLuLimit) + " unknowns");
}

}  // namespace

SolveReport dense_lu_solve(const Matrix& A, const Vector& b, bool refine_step) {
  check_dense_limit(A.rows());
  return dense_lu_impl(A, A, b, refine_step);
}

SolveReport dense_lu_solve(const SparseMatrix& A, const Vector& b, bool refine_step) {
  check_dense_limit(A.rows());
  return dense_lu_impl(Matrix(A), A, b, refine_step);
}

struct Factorization::Impl {
  ColMajorSparse A;
  Eigen::SparseLU<ColMajorSparse, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization(const SparseMatrix& A) : impl_(std::make_unique<Impl>()) {
  if (A.rows() != A.cols()) throw Error("factorization needs a square matrix");
  impl_->A = A;
  impl_->lu.analyzePattern(impl_->A);
  impl_->lu.factorize(impl_->A);
  if (impl_->lu.info() != Eigen::Success) throw SolverError("sparse LU failed: " + impl_->lu.lastErrorMessage());
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Vector Factorization::solve(const Vector& b) const {
  // SparseLU::solve is logically const but not declared so.
  auto& lu = const_cast<Eigen::SparseLU<ColMajorSparse, Eigen::COLAMDOrdering<int>>&>(impl_->lu);
  return lu.solve(b);
}

int Factorization::size() const { return static_cast<int>(impl_->A.rows()); }

SolveReport sparse_lu_solve(const SparseMatrix& A, const Vector& b, bool refine_step) {
  if (A.rows() != b.size()) throw Error("sparse_lu_solve: dimension mismatch");
  const Factorization f(A);
  SolveReport report;
  report.x = f.solve(b);
  if (!report.x.allFinite()) throw SolverError("sparse LU produced a non-finite solution");
  report.residual = relative_residual(A, report.x, b);
  if (refine_step) refine(A, b, [&](const Vector& r) { return f.solve(r); }, report);
  return report;
}

SolveReport cg_solve(const SparseMatrix& A, const Vector& b, double rtol, int max_iter, Preconditioner pc) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw Error("cg_solve: dimension mismatch");
  const Eigen::Index n = b.size();
  if (max_iter < 0) max_iter = static_cast<int>(10 * n);
  Vector inv_diag = Vector::Ones(n);
  if (pc == Preconditioner::Jacobi) {
    inv_diag = A.diagonal();
    if (!(inv_diag.array() > 0).all()) throw SolverError("Jacobi preconditioner needs a positive diagonal");
    inv_diag = inv_diag.cwiseInverse();
  }
  SolveReport report;
  report.x = Vector::Zero(n);
  const double nb = b.norm();
  const double target = rtol * nb;
  Vector r = b;
  Vector z = inv_diag.cwiseProduct(r);
  Vector p = z;
  double rz = r.dot(z);
  double rnorm = nb;
  while (rnorm > target && report.iterations < max_iter) {
    const Vector Ap = A * p;
    const double pAp = p.dot(Ap);
    if (!(pAp > 0)) break;  // not positive definite along p
    const double alpha = rz / pAp;
    report.x += alpha * p;
    r -= alpha * Ap;
    ++report.iterations;
    rnorm = r.norm();
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  report.residual = relative_residual(A, report.x, b);
  report.converged = report.residual <= rtol;
  return report;
}

SolveReport lu_solve(const SparseMatrix& A, const Vector& b, bool refine_step) {
  return A.rows() <= kDenseSwitch ? dense_lu_solve(A, b, refine_step) : sparse_lu_solve(A, b, refine_step);
}

SolveReport solve(const SparseMatrix& A, const Vector& b, SolverKind kind, double rtol) {
  if (kind == SolverKind::CG) {
    try {
      SolveReport r = cg_solve(A, b, rtol);
      if (r.converged) return r;
    } catch (const SolverError&) {
    }
  }
  return lu_solve(A, b, true);
}

MatrixStats matrix_stats(const SparseMatrix& A, const Factorization& solver) {
  if (solver.size() != A.rows()) throw Error("matrix_stats: factorization does not match the matrix");
  MatrixStats s;
  s.total_dofs = static_cast<int>(A.rows());
  if (s.total_dofs == 0) return s;
  s.nnz_per_row = double(A.nonZeros()) / A.rows();
  s.lambda_max = power_iteration(s.total_dofs, [&](const Vector& x) { return Vector(A * x); });
  const double inv = power_iteration(s.total_dofs, [&](const Vector& x) { return solver.solve(x); });
  if (!(inv > 0)) throw SolverError("matrix is not positive definite");
  s.lambda_min = 1.0 / inv;
  s.condition_estimate = s.lambda_max / s.lambda_min;
  return s;
}

MatrixStats matrix_stats(const SparseMatrix& A) { return matrix_stats(A, Factorization(A)); }

double l2_error(const FunctionSpace& space, const Vector& u_h, const ScalarFunction& exact) {
  if (u_h.size() != space.num_dofs()) throw Error("l2_error: DoF vector has the wrong size");
  const QuadRule rule = triangle_rule(std::min(2 * space.element().degree() + 2, kMaxQuadratureDegree));
  const Tabulation tab = tabulate(space.element().reference_basis(), rule.points, 0);
  double sum = 0.0;
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const CellGeometry& g = space.geometry(c);
    const Vector values = tab.derivative(0, 0).transpose() * space.local_coefficients(c, u_h);
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      const double d = values(q) - exact(g.to_physical(rule.points.row(q).transpose()));
      sum += rule.weights(q) * g.detJinv_abs * d * d;
    }
  }
  return std::sqrt(sum);
}

}  // namespace c1fem
