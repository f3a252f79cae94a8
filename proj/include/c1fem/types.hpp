#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace c1fem {

using Point = Eigen::Vector2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when inputs violate a documented precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the linear solvers; the CLI maps it to exit code 2.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Value, gradient and Hessian of a smooth function at a point.
struct Jet {
  double value = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

}  // namespace c1fem
