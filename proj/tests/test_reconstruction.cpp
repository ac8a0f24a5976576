#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlg/correspondences.hpp"
#include "mlg/reconstruction.hpp"

#include <cmath>
#include <random>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

using namespace mlg;

namespace {

Grid grid(double u0, double v0, double h, int n) { return Grid(u0, u0 + (n - 1) * h, n, v0, v0 + (n - 1) * h, n); }

SurfacePatch nil_cylinder() {
  return {make_dim4_model(Family::EKT, 0, 0.5), [](double u, double v) { return Vec3(std::cos(u), std::sin(u), v + 0.5 * u); }};
}

double sup_err(const std::vector<Vec3> &a, const std::vector<Vec3> &b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, (a[k] - b[k]).norm());
  return m;
}

Mat3 random_so3eps(const Vec3 &s, std::mt19937 &rng) {
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  Mat3 X = Mat3::Zero();
  X(0, 1) = U(rng), X(0, 2) = U(rng), X(1, 2) = U(rng);
  // A in so_3^eps: A^T diag(s) + diag(s) A = 0
  Mat3 A = s.asDiagonal() * (X - X.transpose());
  return expm_so3eps(A);
}

} // namespace

TEST_CASE("frame completion has unit determinant") {
  FundamentalData d = extract_fundamental_data(nil_cylinder(), grid(0.3, 0.2, 0.02, 12));
  FrameField f = build_M_from_T(d);
  for (const Mat3 &M : f.M) {
    CHECK(std::abs(M.determinant() - 1.0) < 1e-10);
    CHECK((M.transpose() * d.model.eps.asDiagonal() * M - Mat3(d.ehat.asDiagonal())).norm() < 1e-10);
  }
}

TEST_CASE("exponential stays in the group") {
  std::mt19937 rng(11);
  for (Vec3 s : {Vec3(1, 1, 1), Vec3(1, 1, -1), Vec3(1, -1, 1)}) {
    Mat3 M = random_so3eps(s, rng);
    CHECK((M.transpose() * s.asDiagonal() * M - Mat3(s.asDiagonal())).norm() < 1e-12);
    CHECK(M.determinant() == doctest::Approx(1.0));
  }
}

TEST_CASE("frame integration with zero and constant Theta") {
  Model m = make_model(Vec3::Zero(), Vec3::Ones());
  Grid g = grid(0, 0, 0.05, 9);
  ThetaField z{g, {}, {}, std::vector<Mat3>(g.size(), Mat3::Zero()), std::vector<Mat3>(g.size(), Mat3::Zero())};
  FrameField f = integrate_frame(m, Vec3::Ones(), z, Mat3::Identity());
  for (const Mat3 &M : f.M) CHECK((M - Mat3::Identity()).norm() < 1e-15);

  Mat3 A;
  A << 0, -0.7, 0.2, 0.7, 0, -0.4, -0.2, 0.4, 0;
  ThetaField c{g, {}, {}, std::vector<Mat3>(g.size(), A), std::vector<Mat3>(g.size(), Mat3::Zero())};
  std::mt19937 rng(5);
  Mat3 M0 = random_so3eps(Vec3::Ones(), rng);
  FrameField fc = integrate_frame(m, Vec3::Ones(), c, M0);
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      Mat3 ref = M0 * (g.u(i) * A).exp();
      CHECK((fc.M[g.idx(i, j)] - ref).norm() < 1e-12);
    }
}

TEST_CASE("tangent-projection reconstruction") {
  SurfacePatch s = nil_cylinder();
  Grid g = grid(0.3, 0.2, 0.02, 30);
  FundamentalData d = extract_fundamental_data(s, g);
  GridSurface ref = sample(s, g);
  ReconstructionOptions o;
  o.q0 = ref.pos[0];
  Reconstruction r = reconstruct_from_T(d, o);
  CHECK(sup_err(r.surface.pos, ref.pos) < 1e-6);
  CHECK(r.path_gap < 1e-10);
  CHECK(r.darboux < 1e-3);

  SUBCASE("pointwise noise breaks orthonormality") {
    std::mt19937 rng(2);
    std::normal_distribution<double> N(0.0, 1e-3);
    for (auto &p : d.pts)
      for (auto &t : p.T) t += Vec2(N(rng), N(rng));
    CHECK_THROWS_AS(reconstruct_from_T(d, o), Error);
  }
  SUBCASE("rotating the frame without P breaks the equations") {
    // T rotated by a varying angle stays orthonormal but no longer matches P
    for (int j = 0; j < g.nv; ++j)
      for (int i = 0; i < g.nu; ++i) {
        Mat2 R = rot_matrix(0.5 * g.u(i) * g.v(j), d.ehat);
        for (auto &t : d.at(i, j).T) t = R * t;
      }
    try {
      reconstruct_from_T(d, o);
      FAIL("accepted inconsistent data");
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::Precondition);
    }
  }
}

TEST_CASE("angle reconstruction refuses constant angles") {
  Model nil = make_dim4_model(Family::EKT, 0, 1);
  // vertical plane x = 0 in Nil3: nu = (1,0,0) everywhere
  SurfacePatch p{nil, [](double u, double v) { return Vec3(0.0, u, v); }};
  FundamentalData d = extract_fundamental_data(p, grid(0, 0, 0.05, 12));
  try {
    reconstruct_from_angles(d, 1.0);
    FAIL("constant angles accepted");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Precondition);
    CHECK(std::string(e.what()).find("constant-angle") != std::string::npos);
  }
}

TEST_CASE("reduced-data reconstruction of a Nil3 cylinder") {
  SurfacePatch s = nil_cylinder();
  Grid g = grid(0.3, 0.2, 0.02, 30);
  FundamentalData full = extract_fundamental_data(s, g);
  GridSurface ref = sample(s, g);
  Dim4Params p = dim4_params(full.model);
  REQUIRE(p.family == Family::EKT);
  FundamentalData d = full;
  const double nan = std::nan("");
  for (auto &q : d.pts)
    for (int a = 0; a < 3; ++a)
      if (a != p.dist) q.T[a] = Vec2(nan, nan), q.nu(a) = nan;
  fill_intrinsic_curvature(d);
  ReconstructionOptions o;
  o.q0 = ref.pos[0];
  Reconstruction r = reconstruct_dim4(d, p, o, full.pts[0].M);
  CHECK(sup_err(r.surface.pos, ref.pos) < 1e-5);

  // without the starting frame the result differs by an isometry fixing E3: nu_d is preserved
  Reconstruction r2 = reconstruct_dim4(d, p, o);
  FundamentalData back = extract_fundamental_data(r2.surface);
  double e = 0.0;
  for (std::size_t k = 0; k < back.pts.size(); ++k) e = std::max(e, std::abs(back.pts[k].nu(p.dist) - full.pts[k].nu(p.dist)));
  CHECK(e < 1e-5);

  SUBCASE("violated algebraic condition") {
    for (auto &q : d.pts) q.nu(p.dist) += 0.1;
    CHECK_THROWS_AS(reconstruct_dim4(d, p, o), Error);
  }
}
