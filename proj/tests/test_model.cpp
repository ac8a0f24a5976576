#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlg/model.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace mlg;
using doctest::Approx;

namespace {

bool near(const Vec3 &a, const Vec3 &b, double tol = 1e-12) { return (a - b).cwiseAbs().maxCoeff() < tol; }

} // namespace

TEST_CASE("round sphere constants") {
  Model m = make_model(Vec3(2, 2, 2), Vec3(1, 1, 1));
  CHECK(near(m.mu, Vec3(1, 1, 1)));
  CHECK(near(m.a, Vec3(-1, -1, -1)));
  CHECK(m.group == GroupType::SU2);
  CHECK(m.iso_dim == 6);
  CHECK_FALSE(m.global);
}

TEST_CASE("Sol3 and E(kappa,tau) classification") {
  CHECK(make_model(Vec3(1, -1, 0), Vec3(1, 1, 1)).group == GroupType::Sol3);
  double k = -1.3, t = 0.4;
  Model m = make_model(Vec3(k / (2 * t), k / (2 * t), 2 * t), Vec3(1, 1, 1));
  CHECK(m.family == Family::EKT);
  CHECK(m.iso_dim == 4);
  CHECK(near(m.mu, Vec3(t, t, k / (2 * t) - t)));
  CHECK(near(m.a, Vec3(-t * t, -t * t, 3 * t * t - k)));
}

TEST_CASE("dimension-4 families") {
  CHECK(near(make_dim4_model(Family::EKT, 4, 1).c, Vec3(2, 2, 2)));
  CHECK(near(make_dim4_model(Family::EKT, 0, 0.7).c, Vec3(0, 0, 1.4)));
  Model l = make_dim4_model(Family::LKT, 0, 1);
  CHECK(l.eps(2) == -1);
  CHECK(l.c(2) == Approx(-2));
  CHECK_THROWS_AS(make_dim4_model(Family::EKT, 1, 0), Error);
}

TEST_CASE("c and s") {
  auto a = cs_eval(make_model(Vec3(1, 1, 0), Vec3(1, 1, 1)), std::numbers::pi);
  CHECK(a.first == Approx(-1));
  CHECK(a.second == Approx(0).epsilon(1e-12));
  auto b = cs_eval(make_model(Vec3(0, 3, 0), Vec3(1, 1, 1)), 7);
  CHECK(b.first == Approx(1));
  CHECK(b.second == Approx(7));
  auto c = cs_eval(make_model(Vec3(1, -1, 0), Vec3(1, 1, 1)), 1);
  CHECK(c.first == Approx(std::cosh(1.0)));
  CHECK(c.second == Approx(std::sinh(1.0)));
}

TEST_CASE("frame at the origin and in Nil3") {
  Model m = make_model(Vec3(0.3, -1.2, 0.8), Vec3(1, 1, -1));
  CHECK((frame_at(m, Vec3::Zero()).B - Mat3::Identity()).norm() < 1e-14);
  Frame f = frame_at(make_model(Vec3(0, 0, 2), Vec3(1, 1, 1)), Vec3(1, 2, 5));
  CHECK(near(f.B.col(0), Vec3(1, 0, -2)));
  CHECK(near(f.B.col(1), Vec3(0, 1, 1)));
  CHECK(near(f.B.col(2), Vec3(0, 0, 1)));
  CHECK((f.B * f.Binv - Mat3::Identity()).norm() < 1e-14);
}

TEST_CASE("metric, cross product and connection") {
  Model m = make_model(Vec3(0.5, 1.5, -0.7), Vec3(1, 1, -1));
  CHECK((metric_at(m, Vec3::Zero()) - Mat3(Vec3(1, 1, -1).asDiagonal())).norm() < 1e-14);
  CHECK(near(cross_E(m, Vec3::Unit(1), Vec3::Unit(2)), m.eps(0) * Vec3::Unit(0)));
  // metric in coordinates equals B^-T diag(eps) B^-1
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (int k = 0; k < 20; ++k) {
    Vec3 p(U(rng), U(rng), U(rng));
    Frame f = frame_at(m, p);
    Mat3 g = f.Binv.transpose() * m.eps.asDiagonal() * f.Binv;
    CHECK((metric_at(m, p) - g).norm() < 1e-12);
  }
  Model s3 = make_model(Vec3(2, 2, 2), Vec3(1, 1, 1));
  CHECK(near(connection(s3, 0, 1), Vec3(0, 0, 1)));
  CHECK(sectional_curvature(s3, Vec3::Unit(0), Vec3::Unit(1)) == Approx(1));
}

TEST_CASE("connection is metric and torsion free") {
  Model m = make_model(Vec3(0.9, -0.4, 1.7), Vec3(1, 1, -1));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        double lhs = inner_E(m, connection(m, i, j), Vec3::Unit(k)) + inner_E(m, Vec3::Unit(j), connection(m, i, k));
        CHECK(std::abs(lhs) < 1e-14);
      }
      if (i == j) continue;
      // [E_i, E_j] = c_k E_k with the sign of the cyclic order
      Vec3 br = connection(m, i, j) - connection(m, j, i);
      int k = 3 - i - j;
      double s = (j == (i + 1) % 3) ? 1.0 : -1.0;
      CHECK(near(br, s * m.c(k) * Vec3::Unit(k)));
    }
}

TEST_CASE("covering maps land on the quadrics") {
  Model su = make_model(Vec3(2, 2, 2), Vec3(1, 1, 1));
  auto o = cover_map(su, Vec3::Zero());
  CHECK(std::abs(o.first - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(o.second) < 1e-15);
  Model sl = make_model(Vec3(1, 0.7, -0.6), Vec3(1, 1, 1));
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (int k = 0; k < 50; ++k) {
    Vec3 p(U(rng), U(rng), U(rng));
    auto a = cover_map(su, p);
    CHECK(std::norm(a.first) + std::norm(a.second) == Approx(1).epsilon(1e-12));
    auto b = cover_map(sl, p);
    CHECK(std::norm(b.first) - std::norm(b.second) == Approx(1).epsilon(1e-12));
  }
}

TEST_CASE("global models") {
  CHECK_FALSE(is_global(make_model(Vec3(2, 2, 2), Vec3(1, 1, 1))));
  CHECK(is_global(make_model(Vec3(1, 1, -1), Vec3(1, 1, 1))));
  CHECK(is_global(make_model(Vec3(0, 0, 0), Vec3(1, 1, 1))));
}

TEST_CASE("cyclic relabeling keeps the curvature") {
  Model m = make_model(Vec3(0.4, 1.1, -0.8), Vec3(1, 1, 1));
  Model r = cyclic_relabel(m, 1);
  CHECK(r.c(0) == Approx(1.1));
  CHECK(sectional_curvature(r, Vec3::Unit(0), Vec3::Unit(1)) ==
        Approx(sectional_curvature(m, Vec3::Unit(1), Vec3::Unit(2))));
}
