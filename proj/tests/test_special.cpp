#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlg/special.hpp"

#include <cmath>

using namespace mlg;
using doctest::Approx;

namespace {

Grid grid(double u0, double v0, double h, int n) { return Grid(u0, u0 + (n - 1) * h, n, v0, v0 + (n - 1) * h, n); }

void check_on_set(const Model &m, const ConstantAngleSet &s) {
  for (const Vec3 &nu : s.sample(9)) {
    CHECK((m.eps.array() * nu.array().square()).sum() == Approx(s.ehat3));
    CHECK(std::abs((m.c.array() * nu.array().square()).sum()) < 1e-12);
  }
}

} // namespace

TEST_CASE("constant-angle sets") {
  Model s3 = make_model(Vec3(2, 2, 2), Vec3::Ones());
  CHECK(constant_angle_set(s3).kind == ConstantAngleSet::Kind::Empty);

  Model nil = make_dim4_model(Family::EKT, 0, 1);
  ConstantAngleSet n = constant_angle_set(nil);
  CHECK(n.kind == ConstantAngleSet::Kind::Curves);
  for (const Vec3 &nu : n.sample(9)) {
    CHECK(std::abs(nu(2)) < 1e-12);
    CHECK(nu.head<2>().norm() == Approx(1.0));
  }
  check_on_set(nil, n);

  Model sol = make_model(Vec3(1, -1, 0), Vec3::Ones());
  ConstantAngleSet s = constant_angle_set(sol);
  REQUIRE(s.kind != ConstantAngleSet::Kind::Empty);
  for (const Vec3 &nu : s.sample(9)) CHECK(std::abs(nu(0)) == Approx(std::abs(nu(1))));
  check_on_set(sol, s);

  CHECK(constant_angle_set(make_model(Vec3::Zero(), Vec3::Ones())).kind == ConstantAngleSet::Kind::Sphere);
}

TEST_CASE("totally geodesic distributions") {
  TotallyGeodesicResult a = totally_geodesic(make_model(Vec3(-1, 1, 0), Vec3::Ones()));
  CHECK_FALSE(a.constant_curvature);
  CHECK(a.distributions.size() == 2);
  for (const auto &g : a.distributions) {
    CHECK(g.nu.squaredNorm() == Approx(1.0));
    CHECK(std::abs(g.nu.dot(g.Y1)) < 1e-12);
    CHECK(std::abs(g.nu.dot(g.Y2)) < 1e-12);
  }
  CHECK(totally_geodesic(make_model(Vec3(1, 2, 3), Vec3::Ones())).distributions.empty());
  CHECK(totally_geodesic(make_model(Vec3(1, 0, 0), Vec3::Ones())).distributions.empty());
  CHECK(totally_geodesic(make_model(Vec3::Zero(), Vec3::Ones())).constant_curvature);
}

TEST_CASE("integral surfaces of constant-angle distributions") {
  Model r3 = make_model(Vec3::Zero(), Vec3::Ones());
  IntegralSurface p = integral_surface(r3, Vec3(0, 0, 1), Vec3::Zero(), grid(-1, -1, 0.2, 11));
  CHECK(p.commutativity_defect < 1e-12);
  for (double u : {-0.7, 0.1, 0.9})
    for (double v : {-0.4, 0.6}) CHECK(std::abs(p.patch.position(u, v)(2)) < 1e-12);

  Model nil = make_dim4_model(Family::EKT, 0, 1);
  IntegralSurface q = integral_surface(nil, Vec3(1, 0, 0), Vec3::Zero(), grid(-1, -1, 0.2, 11));
  CHECK(q.commutativity_defect < 1e-9);
  for (double u : {-0.7, 0.1, 0.9})
    for (double v : {-0.4, 0.6}) CHECK(std::abs(q.patch.position(u, v)(0)) < 1e-9);

  CHECK_THROWS_AS(integral_surface(nil, Vec3(0, 0, 1), Vec3::Zero(), grid(-1, -1, 0.2, 11)), Error);
}

TEST_CASE("vertical cylinders and their companions") {
  for (double r : {0.5, 1.0, 1.5}) {
    Model m = make_dim4_model(Family::EKT, -1, 1);
    VerticalCylinder c = vertical_cylinder(m, r);
    CHECK(c.H == Approx((-4 - r * r) / (8 * r)));
    FundamentalData d = extract_fundamental_data(c.surface, grid(0.2, 0.1, 0.02, 9));
    FundamentalData e = extract_fundamental_data(c.companion, grid(0.2, 0.1, 0.02, 9));
    for (std::size_t k = 0; k < d.pts.size(); ++k) {
      CHECK(std::abs(d.pts[k].H) == Approx(std::abs(c.H)).epsilon(1e-6));
      for (int a = 0; a < 3; ++a) CHECK(std::abs(d.pts[k].nu(a)) == Approx(std::abs(e.pts[k].nu(a))).epsilon(1e-6));
    }
  }
  CHECK(vertical_cylinder(make_dim4_model(Family::EKT, 0, 1), 1.0).H == Approx(-0.5));
  CHECK_THROWS_AS(vertical_cylinder(make_dim4_model(Family::EKT, -1, 1), 2.5), Error);
}
