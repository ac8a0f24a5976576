#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlg/io.hpp"

#include <cmath>
#include <sstream>

using namespace mlg;

namespace {

GridSurface sphere_grid() {
  SurfacePatch p{make_model(Vec3::Zero(), Vec3::Ones()),
                 [](double u, double v) { return Vec3(std::sin(v) * std::cos(u), std::sin(v) * std::sin(u), std::cos(v)); }};
  return sample(p, Grid(0.1, 0.1 + 0.03 * 7, 8, 0.9, 0.9 + 0.03 * 6, 7));
}

ErrorKind kind_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.kind();
  }
  return ErrorKind(0);
}

} // namespace

TEST_CASE("surface CSV round trip is exact") {
  GridSurface s = sphere_grid();
  std::stringstream ss;
  write_surface_csv(ss, s);
  GridSurface t = read_surface_csv(ss, s.model);
  CHECK(t.grid.nu == 8);
  CHECK(t.grid.nv == 7);
  CHECK(t.grid.du == doctest::Approx(0.03));
  for (std::size_t k = 0; k < s.pos.size(); ++k) CHECK(t.pos[k] == s.pos[k]);
  CHECK(std::stod(fmt17(0.1)) == 0.1);
}

TEST_CASE("malformed surface CSV") {
  Model m = make_model(Vec3::Zero(), Vec3::Ones());
  GridSurface s = sphere_grid();
  std::stringstream ss;
  write_surface_csv(ss, s);
  std::string text = ss.str();

  std::string bad = text;
  auto row3 = bad.find('\n', bad.find('\n', bad.find('\n', bad.find('\n') + 1) + 1) + 1);
  auto end3 = bad.find('\n', row3 + 1);
  auto comma = bad.rfind(',', end3);
  bad.replace(comma + 1, end3 - comma - 1, "nan");
  std::istringstream a(bad);
  CHECK(kind_of([&] { read_surface_csv(a, m); }) == ErrorKind::Data);

  std::istringstream b("u,v,x,y,z\n0,0,1,2,3\n0.1,0,1,2,3\n0.3,0,1,2,3\n0,1,1,2,3\n0.1,1,1,2,3\n0.3,1,1,2,3\n");
  CHECK(kind_of([&] { read_surface_csv(b, m); }) == ErrorKind::Data);

  std::istringstream c("u,v,x,y\n0,0,1,2\n");
  CHECK(kind_of([&] { read_surface_csv(c, m); }) == ErrorKind::Parse);

  std::istringstream d("u,v,x,y,z\n0,0,1,abc,3\n");
  CHECK(kind_of([&] { read_surface_csv(d, m); }) == ErrorKind::Parse);
}

TEST_CASE("fundamental data CSV round trip") {
  GridSurface s = sphere_grid();
  FundamentalData d = extract_fundamental_data(s);
  fill_intrinsic_curvature(d);
  std::stringstream ss;
  write_fundamental_csv(ss, d);
  FundamentalData e = read_fundamental_csv(ss, d.model);
  REQUIRE(e.pts.size() == d.pts.size());
  CHECK(e.ehat == d.ehat);
  for (std::size_t k = 0; k < d.pts.size(); ++k) {
    CHECK((e.pts[k].S - d.pts[k].S).norm() < 1e-15);
    CHECK((e.pts[k].P - d.pts[k].P).norm() == 0.0);
    CHECK(e.pts[k].nu == d.pts[k].nu);
    CHECK(e.pts[k].H == d.pts[k].H);
    CHECK(e.pts[k].K == d.pts[k].K);
    for (int a = 0; a < 3; ++a) CHECK(e.pts[k].T[a] == d.pts[k].T[a]);
  }
}

TEST_CASE("model JSON") {
  Model a = model_from_json(nlohmann::json::parse(R"({"c":[1,-1,0],"eps":[1,1,1]})"));
  CHECK(a.group == GroupType::Sol3);
  Model b = model_from_json(nlohmann::json::parse(R"({"family":"EKT","kappa":4,"tau":1})"));
  CHECK((b.c - Vec3(2, 2, 2)).norm() < 1e-15);
  Model c = model_from_json(model_to_json(b));
  CHECK(c.c == b.c);
  CHECK(c.eps == b.eps);
  CHECK(kind_of([] { model_from_json(nlohmann::json::parse(R"({"c":[1,2],"eps":[1,1,1]})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { model_from_json(nlohmann::json::parse(R"({"family":"XYZ"})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { read_json("/nonexistent/model.json"); }) == ErrorKind::Parse);
}
