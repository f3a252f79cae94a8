#pragma once

#include "c1fem/assembly.hpp"

#include <memory>

namespace c1fem {

struct SolveReport {
  Vector x;
  double residual = 0.0;  // ||A x - b|| / ||b||
  int iterations = 0;     // CG only
  double pivot_growth = 0.0;  // dense LU only: max|U| / max|A|
  bool refined = false;
  bool converged = true;
};

inline constexpr int kDenseLuLimit = 20000;

/// Partial-pivoting LU, optionally followed by one step of iterative
/// refinement.  Throws SolverError if A is singular to working precision.
SolveReport dense_lu_solve(const Matrix& A, const Vector& b, bool refine = true);
SolveReport dense_lu_solve(const SparseMatrix& A, const Vector& b, bool refine = true);

/// Sparse LU with COLAMD ordering, optionally followed by one refinement step.
SolveReport sparse_lu_solve(const SparseMatrix& A, const Vector& b, bool refine = true);

enum class Preconditioner { Jacobi, None };

/// Preconditioned conjugate gradients from a zero initial guess, stopping
/// on ||b - A x|| <= rtol ||b||.  max_iter < 0 means 10 n.  Does not throw
/// on non-convergence; check SolveReport::converged.
SolveReport cg_solve(const SparseMatrix& A, const Vector& b, double rtol = 1e-10, int max_iter = -1,
                     Preconditioner pc = Preconditioner::Jacobi);

enum class SolverKind { LU, CG };

/// Direct solve: dense LU up to kDenseSwitch unknowns, sparse LU beyond.
inline constexpr int kDenseSwitch = 2500;
SolveReport lu_solve(const SparseMatrix& A, const Vector& b, bool refine = true);

/// LU, or CG falling back to LU when it does not converge.
SolveReport solve(const SparseMatrix& A, const Vector& b, SolverKind kind, double rtol = 1e-10);

/// Reusable factorization for repeated solves with one matrix.
class Factorization {
 public:
  explicit Factorization(const SparseMatrix& A);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;
  Vector solve(const Vector& b) const;
  int size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct MatrixStats {
  int total_dofs = 0;
  double nnz_per_row = 0.0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double condition_estimate = 0.0;
};

/// Power iteration on A and inverse power iteration through the factorization.
MatrixStats matrix_stats(const SparseMatrix& A, const Factorization& solver);
MatrixStats matrix_stats(const SparseMatrix& A);

/// sqrt(sum_K int_K (u_h - u)^2) with quadrature of degree 2p + 2.
double l2_error(const FunctionSpace& space, const Vector& u_h, const ScalarFunction& exact);

}  // namespace c1fem
