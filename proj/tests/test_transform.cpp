#include "c1fem/transform.hpp"

#include "duality.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace c1fem;
using c1fem::testing::lattice_points;
using c1fem::testing::max_reproduction_error;
using c1fem::testing::physical_duality;
using c1fem::testing::pulled_back;
using c1fem::testing::monomial_jet;
using c1fem::testing::random_triangles;

namespace {

std::function<Jet(const Point&)> polynomial(std::vector<std::array<double, 3>> terms) {
  return [terms](const Point& p) {
    Jet r;
    for (const auto& [c, a, b] : terms) {
      const Jet m = monomial_jet(int(a), int(b), p);
      r.value += c * m.value;
      r.grad += c * m.grad;
      r.hess += c * m.hess;
    }
    return r;
  };
}

const CellGeometry kReference = cell_geometry({Point(0, 0), Point(1, 0), Point(0, 1)});

}  // namespace

TEST(Hermite, IdentityAndTranslation) {
  EXPECT_EQ(hermite_M(kReference).M, Matrix::Identity(10, 10));
  const CellGeometry shifted = cell_geometry({Point(2, 3), Point(3, 3), Point(2, 4)});
  EXPECT_EQ(hermite_M(shifted).M, Matrix::Identity(10, 10));
}

TEST(Hermite, PureScaling) {
  // Physical cell = 2 * reference, so xhat = x / 2 and J = I / 2.
  const CellGeometry g = cell_geometry({Point(0, 0), Point(2, 0), Point(0, 2)});
  const Matrix M = hermite_M(g).M;
  for (int v = 0; v < 3; ++v) {
    EXPECT_EQ(M(3 * v, 3 * v), 1.0);
    EXPECT_LT((M.block(3 * v + 1, 3 * v + 1, 2, 2) - 2.0 * Matrix::Identity(2, 2)).norm(), 1e-15);
  }
}

TEST(Hermite, FigureGeometryDuality) {
  const MappedElement el(Family::Hermite);
  const CellGeometry g = cell_geometry({Point(0, 0), Point(1.5, 0.5), Point(0.8, 1.2)});
  const Matrix d = physical_duality(el, g, hermite_M(g).M);
  EXPECT_LT((d - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Morley, IdentityAndScaling) {
  EXPECT_LT((morley_M(kReference).M - Matrix::Identity(6, 6)).norm(), 1e-15);
  for (int e = 0; e < 3; ++e) EXPECT_LT((edge_frame_block(kReference, e) - Eigen::Matrix2d::Identity()).norm(), 1e-15);

  const double s = 0.25;
  const CellGeometry g = cell_geometry({Point(0, 0), Point(s, 0), Point(0, s)});
  const Matrix V = morley_M(g).M.transpose();
  for (int e = 0; e < 3; ++e) {
    // Similarity maps keep normals and tangents, so B^i = s I.
    EXPECT_LT((edge_frame_block(g, e) - s * Eigen::Matrix2d::Identity()).norm(), 1e-15);
    EXPECT_NEAR(V(3 + e, 3 + e), s, 1e-15);
    for (int v = 0; v < 3; ++v) EXPECT_NEAR(V(3 + e, v), 0.0, 1e-15);
  }
}

TEST(Morley, ThreeStepMatchesClosedForm) {
  for (const auto& tri : random_triangles(100, 3)) {
    const CellGeometry g = cell_geometry(tri);
    const ThreeStepFactors f = morley_factors(g);
    for (Eigen::Index r = 0; r < f.E.rows(); ++r) {
      EXPECT_EQ((f.E.row(r).array() != 0.0).count(), 1);
      EXPECT_EQ(f.E.row(r).sum(), 1.0);
    }
    EXPECT_LT((f.V() - morley_M(g).M.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Argyris, IdentityGeometry) {
  EXPECT_LT((argyris_M(kReference).M - Matrix::Identity(21, 21)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Argyris, SelectorStructure) {
  const ThreeStepFactors f = argyris_factors(cell_geometry(random_triangles(1, 5)[0]));
  EXPECT_EQ(f.D.rows(), 24);
  EXPECT_EQ(f.VC.rows(), 24);
  for (Eigen::Index r = 0; r < f.E.rows(); ++r) EXPECT_EQ((f.E.row(r).array() != 0.0).count(), 1);
}

TEST(Argyris, HessianBlockPushesForward) {
  const Eigen::Matrix2d J = (Eigen::Matrix2d() << 0.7, -0.3, 0.4, 1.9).finished();
  const Eigen::Matrix3d theta = hessian_block(J);
  const Eigen::Matrix2d H = (Eigen::Matrix2d() << 1.3, -0.2, -0.2, 0.6).finished();
  // A reference Hessian Hh pulls back to J^T Hh J; theta must undo that.
  const Eigen::Matrix2d pulled = J.transpose() * H * J;
  const Eigen::Vector3d back = theta * Eigen::Vector3d(pulled(0, 0), pulled(0, 1), pulled(1, 1));
  EXPECT_LT((back - Eigen::Vector3d(H(0, 0), H(0, 1), H(1, 1))).norm(), 1e-14);
}

TEST(Bell, IdentityGeometryGivesReferenceBasis) {
  const MappedElement el(Family::Bell);
  const Matrix M = bell_M(kReference).M;
  ASSERT_EQ(M.rows(), 18);
  ASSERT_EQ(M.cols(), 21);
  const Matrix pts = lattice_points();
  const Matrix mapped = M * tabulate(el.reference_basis(), pts, 0).derivative(0, 0);
  const Matrix direct = tabulate(el.nodal(), pts, 0).derivative(0, 0);
  EXPECT_LT((mapped - direct).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Transform, MasterDualityOnRandomTriangles) {
  struct Case {
    Family family;
    int degree;
    double tol;
  };
  for (const Case c : {Case{Family::Lagrange, 3, 1e-10}, Case{Family::Hermite, 3, 1e-9},
                       Case{Family::Morley, 2, 1e-9}, Case{Family::Argyris, 5, 1e-8},
                       Case{Family::Bell, 5, 1e-8}}) {
    const MappedElement el(c.family, c.degree);
    double worst = 0.0, worst_scaled = 0.0;
    for (const auto& tri : random_triangles(100, 17)) {
      const CellGeometry g = cell_geometry(tri, {0.3, 0.7, 1.1});
      const Matrix d = physical_duality(el, g, el.transform(g, false).M);
      worst = std::max(worst, (d - Matrix::Identity(el.size(), el.size())).cwiseAbs().maxCoeff());
      const TransformMatrix scaled = el.transform(g, true);
      const Matrix ds = physical_duality(el, g, scaled.M);
      const Matrix expected = Matrix(scaled.scaling.asDiagonal());
      worst_scaled = std::max(worst_scaled, (ds - expected).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst, c.tol) << el.name();
    EXPECT_LT(worst_scaled, c.tol) << el.name() << " scaled";
  }
}

TEST(Transform, PolynomialReproduction) {
  const auto cubic = polynomial({{1, 3, 0}, {-2, 1, 2}, {0.5, 0, 3}, {1, 1, 1}, {-1, 0, 0}});
  const auto quadratic = polynomial({{1, 2, 0}, {-0.7, 1, 1}, {0.3, 0, 2}, {1, 1, 0}, {2, 0, 0}});
  const auto quintic = polynomial({{1, 5, 0}, {-3, 2, 3}});
  const auto quartic = polynomial({{1, 4, 0}, {-2, 2, 2}, {0.4, 1, 3}, {1, 0, 4}, {0.1, 3, 0}});
  const auto tris = random_triangles(20, 23);
  for (const auto& tri : tris) {
    const CellGeometry g = cell_geometry(tri);
    for (bool scaled : {false, true}) {
      EXPECT_LT(max_reproduction_error(MappedElement(Family::Hermite), g, cubic, scaled), 1e-8);
      EXPECT_LT(max_reproduction_error(MappedElement(Family::Morley), g, quadratic, scaled), 1e-8);
      EXPECT_LT(max_reproduction_error(MappedElement(Family::Argyris), g, quintic, scaled), 1e-8);
      EXPECT_LT(max_reproduction_error(MappedElement(Family::Bell), g, quartic, scaled), 1e-8);
    }
  }
  // Every monomial of the reproduction degree, one physical cell per family.
  const CellGeometry g = cell_geometry(tris[0]);
  for (const auto& [family, degree] : {std::pair{Family::Hermite, 3}, std::pair{Family::Morley, 2},
                                       std::pair{Family::Argyris, 5}, std::pair{Family::Bell, 4}}) {
    const MappedElement el(family);
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        const auto mono = polynomial({{1.0, double(a), double(b)}});
        EXPECT_LT(max_reproduction_error(el, g, mono, true), 1e-8) << el.name() << " x^" << a << " y^" << b;
      }
    }
  }
}

TEST(ScaleM, LagrangeUnchangedHermiteRowsDividedByH) {
  const CellGeometry g = cell_geometry({Point(0, 0), Point(0.1, 0.02), Point(0.03, 0.12)}, {0.1, 0.1, 0.1});
  const MappedElement p3(Family::Lagrange, 3);
  EXPECT_EQ(p3.transform(g, true).M, Matrix::Identity(10, 10));

  const TransformMatrix h = hermite_M(g);
  const TransformMatrix hs = scale_M(h, g);
  for (int v = 0; v < 3; ++v) {
    EXPECT_EQ(hs.M.row(3 * v), h.M.row(3 * v));
    EXPECT_LT((hs.M.row(3 * v + 1) - 10.0 * h.M.row(3 * v + 1)).norm(), 1e-12);
    EXPECT_LT((hs.M.row(3 * v + 2) - 10.0 * h.M.row(3 * v + 2)).norm(), 1e-12);
  }
  EXPECT_EQ(hs.M.row(9), h.M.row(9));
}

TEST(ScaleM, PreservesSparsityPattern) {
  for (Family f : {Family::Hermite, Family::Morley, Family::Argyris, Family::Bell}) {
    const MappedElement el(f);
    const CellGeometry g = cell_geometry(random_triangles(1, 31)[0], {0.2, 0.5, 0.9});
    const Matrix a = el.transform(g, false).M, b = el.transform(g, true).M;
    EXPECT_TRUE(((a.array().abs() > 0) == (b.array().abs() > 0)).all()) << el.name();
  }
}
