#pragma once

#include "mlg/surface.hpp"

namespace mlg {

// cos + sin J on spacelike surfaces, cosh + sinh J on timelike ones.
Mat2 rot_matrix(double theta, const Vec3 &ehat);
Vec2 rot_theta(const Vec2 &v, double theta, const Vec3 &ehat);

struct LawsonParams {
  double H = 0.0, tau = 0.0;
};
// eps is ehat3 of the surface; hyperbolic for timelike surfaces.
LawsonParams lawson_params(double H, double tau, double theta, double eps, bool hyperbolic);

struct CorrespondenceParams {
  double theta = 0.0;
  bool hyperbolic = false;
  double ehat3 = 1.0;
  Dim4Params source, target;
  double H = 0.0, H_target = 0.0;
};

struct Correspondence {
  FundamentalData data; // S, T[dist], nu[dist], H, K; other tangent projections are NaN
  CorrespondenceParams params;
};

// Mean of H over the grid; throws if the grid is not CMC to the given relative tolerance.
double cmc_value(const FundamentalData &d, double rel_tol = 1e-6);

Correspondence daniel_transform(const FundamentalData &d, double theta, double cmc_tol = 1e-6);

double twin_theta(double H);
// Twin immersion data in the round sphere c=(2,2,2): all T rotate, angles unchanged.
Correspondence twin_s3(const FundamentalData &d, double cmc_tol = 1e-6);

} // namespace mlg
