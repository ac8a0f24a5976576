#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlg/correspondences.hpp"

#include <cmath>
#include <numbers>

using namespace mlg;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

Grid grid(double u0, double v0, double h, int n) { return Grid(u0, u0 + (n - 1) * h, n, v0, v0 + (n - 1) * h, n); }

// CMC vertical cylinder of radius r in E(kappa,tau), H = (kappa r^2 - 4)/(8r) up to orientation.
SurfacePatch cylinder(double kappa, double tau, double r) {
  double f = 4 * r / (4 + kappa * r * r);
  return {make_dim4_model(Family::EKT, kappa, tau),
          [=](double u, double v) { return Vec3(r * std::cos(u), r * std::sin(u), f * (v + tau * r * u)); }};
}

} // namespace

TEST_CASE("rotation on the tangent plane") {
  Vec3 sp(1, 1, 1), tl(1, -1, 1);
  CHECK((rot_matrix(0.0, sp) - Mat2::Identity()).norm() == 0.0);
  CHECK((rot_matrix(pi / 2, sp) - FrameAlgebra{sp}.J()).norm() < 1e-15);
  FrameAlgebra a{tl};
  Vec2 x(0.3, -1.2);
  for (double t : {-1.0, 0.4, 2.0}) {
    Vec2 y = rot_theta(x, t, tl);
    CHECK(a.dot(y, y) == Approx(a.dot(x, x)));
  }
  CHECK((rot_matrix(0.7, tl) * rot_matrix(-0.7, tl) - Mat2::Identity()).norm() < 1e-14);
}

TEST_CASE("Lawson parameters") {
  LawsonParams p = lawson_params(0.0, 1.0, pi / 2, 1.0, false);
  CHECK(p.H == Approx(1.0));
  CHECK(p.tau == Approx(0.0).epsilon(1e-15));
  LawsonParams q = lawson_params(0.5, 0.0, pi / 2, 1.0, false);
  CHECK(q.H == Approx(0.0).epsilon(1e-15));
  CHECK(q.tau == Approx(-0.5));
  // H^2 + tau^2 is invariant on the trigonometric branch, tau^2 - H^2 on the hyperbolic one
  LawsonParams t = lawson_params(0.3, 0.8, 1.1, -1.0, false);
  CHECK(t.H * t.H + t.tau * t.tau == Approx(0.73));
  LawsonParams h = lawson_params(0.3, 0.8, 0.6, 1.0, true);
  CHECK(h.tau * h.tau - h.H * h.H == Approx(0.55));
}

TEST_CASE("Daniel transform") {
  FundamentalData d = extract_fundamental_data(cylinder(-1, 1, 0.8), grid(0.2, 0.1, 0.02, 15));
  double H = cmc_value(d);
  Correspondence same = daniel_transform(d, 0.0);
  for (std::size_t k = 0; k < d.pts.size(); ++k) {
    CHECK((same.data.pts[k].S - d.pts[k].S).norm() < 1e-14);
    CHECK((same.data.pts[k].T[2] - d.pts[k].T[2]).norm() < 1e-14);
  }
  for (double th : {0.4, -1.3, pi / 3}) {
    Correspondence c = daniel_transform(d, th);
    const Dim4Params &s = c.params.source, &t = c.params.target;
    CHECK(t.kappa - 4 * t.tau * t.tau == Approx(s.kappa - 4 * s.tau * s.tau));
    CHECK(c.params.H_target * c.params.H_target + t.tau * t.tau == Approx(H * H + s.tau * s.tau));
    for (const auto &p : c.data.pts) {
      CHECK(p.S.trace() / 2 == Approx(c.params.H_target));
      CHECK(p.S.determinant() - p.H * p.H == Approx(d.pts[0].S.determinant() - H * H).epsilon(1e-6));
      CHECK(std::isnan(p.T[0](0)));
    }
  }
}

TEST_CASE("Daniel transform rejects non-CMC data") {
  SurfacePatch e{make_dim4_model(Family::EKT, -1, 1),
                 [](double u, double v) { return Vec3(std::cos(u), 0.5 * std::sin(u), v + u); }};
  FundamentalData d = extract_fundamental_data(e, grid(0.2, 0.1, 0.02, 15));
  try {
    daniel_transform(d, 0.3);
    FAIL("non-CMC accepted");
  } catch (const Error &err) {
    CHECK(err.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("twin immersions") {
  CHECK(twin_theta(1.0) == Approx(-pi / 2));
  CHECK(twin_theta(std::sqrt(3.0)) == Approx(-2 * pi / 3));
  Model s3 = make_model(Vec3(2, 2, 2), Vec3::Ones());
  SurfacePatch pl{s3, [](double u, double v) { return Vec3(u, v, 0.0); }};
  FundamentalData d = extract_fundamental_data(pl, grid(0.1, 0.1, 0.01, 12));
  CHECK_THROWS_AS(twin_s3(d), Error);
  FundamentalData r3 = extract_fundamental_data(cylinder(0, 1, 1), grid(0.1, 0.1, 0.02, 12));
  CHECK_THROWS_AS(twin_s3(r3), Error);
}
