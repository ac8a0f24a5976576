#pragma once

#include "mlg/surface.hpp"

#include <optional>
#include <vector>

namespace mlg {

// {nu : sum eps_a nu_a^2 = ehat3, sum c_a nu_a^2 = 0}.
// In squared coordinates w = nu^2 this is a line cut by the orthant w >= 0.
struct ConstantAngleSet {
  enum class Kind { Empty, Points, Curves, Sphere };
  Kind kind = Kind::Empty;
  double ehat3 = 1.0;
  Vec3 eps = Vec3::Ones();
  // Segment w(t) = w0 + t (w1 - w0), t in [0,1], for Points (w0 == w1) and Curves.
  Vec3 w0 = Vec3::Zero(), w1 = Vec3::Zero();
  bool bounded = true; // false when the segment was clipped at the sampling cap

  // Point on the branch with sign pattern bits (bit a set means nu_a < 0).
  Vec3 at(double t, unsigned signs) const;
  // Distinct sampled points over all sign branches.
  std::vector<Vec3> sample(int n) const;
};

ConstantAngleSet constant_angle_set(const Model &m, double ehat3 = 1.0, double cap = 10.0);

struct GeodesicDistribution {
  int k = 2;    // index with mu_k = 0
  Vec3 nu;      // constant angles of the leaves
  Vec3 Y1, Y2;  // spanning left-invariant fields, E components
};

struct TotallyGeodesicResult {
  bool constant_curvature = false; // every plane is totally geodesic
  std::vector<GeodesicDistribution> distributions;
};

TotallyGeodesicResult totally_geodesic(const Model &m);

// Spanning fields for the constant-angle distribution orthogonal to nu.
std::pair<Vec3, Vec3> spanning_fields(const Vec3 &nu);

struct IntegralSurface {
  SurfacePatch patch;  // (u,v) -> flow of Y2 for time v after flow of Y1 for time u from q0
  double commutativity_defect = 0.0; // max |phi_Y2 o phi_Y1 - phi_Y1 o phi_Y2| over the sampled grid
};

// Flow of the left-invariant field Y (E components) for time t; RK4 with a fixed step count.
Vec3 flow(const Model &m, const Vec3 &Y, const Vec3 &p, double t, int steps = 64);

IntegralSurface integral_surface(const Model &m, const Vec3 &nu, const Vec3 &q0, const Grid &extent, double tol = 1e-9);

struct VerticalCylinder {
  SurfacePatch surface, companion;
  double H = 0.0;
  double conformal = 1.0; // induced metric is conformal * (du^2 + dv^2)
};

VerticalCylinder vertical_cylinder(const Model &m, double r);

} // namespace mlg
