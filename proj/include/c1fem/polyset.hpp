#pragma once

#include "c1fem/types.hpp"

#include <vector>

namespace c1fem {

/// Position of the derivative d^{kx+ky} / dx^kx dy^ky in a derivative table.
/// Tables are ordered by total order, then by ky: (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) ...
constexpr int derivative_index(int kx, int ky) {
  return (kx + ky) * (kx + ky + 1) / 2 + ky;
}

constexpr int derivative_count(int max_order) {
  return (max_order + 1) * (max_order + 2) / 2;
}

/// Orthonormal (Dubiner) basis for P_p on the reference triangle
/// (0,0), (1,0), (0,1).  Members are orthonormal in L2 over the triangle, so
/// the constant member has value sqrt(2).
class PolyBasis {
 public:
  static constexpr int kMaxDegree = 6;
  static constexpr int kMaxDerivative = 3;

  explicit PolyBasis(int degree);

  int degree() const { return degree_; }
  int dimension() const { return (degree_ + 1) * (degree_ + 2) / 2; }

  /// Returns derivative_count(max_order) tables; table derivative_index(kx,ky)
  /// holds d^{kx+ky} P_m / dx^kx dy^ky at points.row(q) in entry (q, m).
  std::vector<Matrix> tabulate(int max_order, const Matrix& points) const;

 private:
  int degree_;
};

}  // namespace c1fem
