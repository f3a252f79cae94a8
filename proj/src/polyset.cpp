#include "c1fem/polyset.hpp"

#include <array>
#include <cmath>
#include <string>

namespace c1fem {

namespace {

constexpr int poly_index(int p, int q) { return (p + q) * (p + q + 1) / 2 + q; }

// Jacobi recurrence coefficients for P^{(a,0)}_{n+1} in terms of P_n, P_{n-1}.
std::array<double, 3> jacobi_coefficients(int a, int n) {
  const double an = (a + 2.0 * n + 1) * (a + 2.0 * n + 2) / (2.0 * (n + 1) * (a + n + 1));
  const double bn = double(a) * a * (a + 2.0 * n + 1) /
                    (2.0 * (n + 1) * (a + n + 1) * (a + 2.0 * n));
  const double cn = double(n) * (a + n) * (a + 2.0 * n + 2) /
                    ((n + 1.0) * (a + n + 1) * (a + 2.0 * n));
  return {an, bn, cn};
}

}  // namespace

PolyBasis::PolyBasis(int degree) : degree_(degree) {
  if (degree < 0 || degree > kMaxDegree) {
    throw Error("PolyBasis: degree " + std::to_string(degree) + " outside [0, " +
                std::to_string(kMaxDegree) + "]");
  }
}

std::vector<Matrix> PolyBasis::tabulate(int max_order, const Matrix& points) const {
  if (max_order < 0 || max_order > kMaxDerivative) {
    throw Error("PolyBasis: derivative order " + std::to_string(max_order) + " unsupported");
  }
  if (points.cols() != 2) throw Error("PolyBasis: points must have two columns");

  const int n = degree_;
  const Eigen::Index nq = points.rows();
  const Eigen::ArrayXd x0 = 2.0 * points.col(0).array() - 1.0;
  const Eigen::ArrayXd x1 = 2.0 * points.col(1).array() - 1.0;
  const Eigen::ArrayXd f3 = 0.25 * (1.0 - x1).square();

  std::vector<Matrix> tables(derivative_count(max_order));
  Eigen::ArrayXXd r(nq, dimension());

  // Derivatives are produced in increasing total order; each step uses the
  // Leibniz rule on the (at most quadratic) recurrence multipliers.
  for (int k = 0; k <= max_order; ++k) {
    for (int kx = 0; kx <= k; ++kx) {
      const int ky = k - kx;
      auto lower = [&](int dx, int dy, int col) {
        return tables[derivative_index(dx, dy)].col(col).array();
      };

      r.col(0).setConstant(kx == 0 && ky == 0 ? 1.0 : 0.0);
      for (int p = 1; p <= n; ++p) {
        const double a = (2.0 * p - 1.0) / p;
        r.col(poly_index(p, 0)) = (x0 + 0.5 * x1 + 0.5) * r.col(poly_index(p - 1, 0)) * a;
        if (kx > 0) r.col(poly_index(p, 0)) += 2.0 * kx * a * lower(kx - 1, ky, poly_index(p - 1, 0));
        if (ky > 0) r.col(poly_index(p, 0)) += ky * a * lower(kx, ky - 1, poly_index(p - 1, 0));
        if (p > 1) {
          r.col(poly_index(p, 0)) -= f3 * r.col(poly_index(p - 2, 0)) * (a - 1.0);
          if (ky > 0) {
            r.col(poly_index(p, 0)) -=
                ky * (x1 - 1.0) * lower(kx, ky - 1, poly_index(p - 2, 0)) * (a - 1.0);
          }
          if (ky > 1) {
            r.col(poly_index(p, 0)) -=
                ky * (ky - 1.0) * lower(kx, ky - 2, poly_index(p - 2, 0)) * (a - 1.0);
          }
        }
      }

      for (int p = 0; p < n; ++p) {
        r.col(poly_index(p, 1)) = r.col(poly_index(p, 0)) * (x1 * (1.5 + p) + 0.5 + p);
        if (ky > 0) r.col(poly_index(p, 1)) += 2.0 * ky * (1.5 + p) * lower(kx, ky - 1, poly_index(p, 0));
        for (int q = 1; q < n - p; ++q) {
          const auto [a1, a2, a3] = jacobi_coefficients(2 * p + 1, q);
          r.col(poly_index(p, q + 1)) =
              r.col(poly_index(p, q)) * (x1 * a1 + a2) - r.col(poly_index(p, q - 1)) * a3;
          if (ky > 0) r.col(poly_index(p, q + 1)) += 2.0 * ky * a1 * lower(kx, ky - 1, poly_index(p, q));
        }
      }
      tables[derivative_index(kx, ky)] = r.matrix();
    }
  }

  for (auto& t : tables) {
    for (int p = 0; p <= n; ++p) {
      for (int q = 0; q <= n - p; ++q) {
        t.col(poly_index(p, q)) *= 2.0 * std::sqrt((p + 0.5) * (p + q + 1.0));
      }
    }
  }
  return tables;
}

}  // namespace c1fem
