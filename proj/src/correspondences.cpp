#include "mlg/correspondences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlg {

Mat2 rot_matrix(double theta, const Vec3 &ehat) {
  Mat2 J = FrameAlgebra{ehat}.J();
  if (ehat(0) * ehat(1) > 0) return std::cos(theta) * Mat2::Identity() + std::sin(theta) * J;
  return std::cosh(theta) * Mat2::Identity() + std::sinh(theta) * J;
}

Vec2 rot_theta(const Vec2 &v, double theta, const Vec3 &ehat) { return rot_matrix(theta, ehat) * v; }

LawsonParams lawson_params(double H, double tau, double theta, double eps, bool hyperbolic) {
  double eH;
  LawsonParams out;
  if (!hyperbolic) {
    eH = eps * H * std::cos(theta) + tau * std::sin(theta);
    out.tau = -eps * H * std::sin(theta) + tau * std::cos(theta);
  } else {
    eH = eps * H * std::cosh(theta) - tau * std::sinh(theta);
    out.tau = -eps * H * std::sinh(theta) + tau * std::cosh(theta);
  }
  out.H = eps * eH;
  return out;
}

double cmc_value(const FundamentalData &d, double rel_tol) {
  double mean = 0.0, amean = 0.0;
  for (const auto &p : d.pts) mean += p.H, amean += std::abs(p.H);
  mean /= d.pts.size();
  amean /= d.pts.size();
  double var = 0.0;
  for (const auto &p : d.pts) var += (p.H - mean) * (p.H - mean);
  double sd = std::sqrt(var / d.pts.size());
  if (sd > rel_tol * (amean > 1e-6 ? amean : 1.0))
    throw math_error("source is not CMC (stddev(H) = " + std::to_string(sd) + ")");
  return mean;
}

namespace {

Correspondence rotate(const FundamentalData &d, double theta, double H, const LawsonParams &lp, bool all_T, int dist) {
  Correspondence c;
  c.data = d;
  const Vec3 &eh = d.ehat;
  Mat2 R = rot_matrix(theta, eh);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto &p : c.data.pts) {
    p.S = eh(2) * lp.H * Mat2::Identity() + R * (p.S - eh(2) * H * Mat2::Identity());
    p.H = lp.H;
    for (int a = 0; a < 3; ++a) {
      if (all_T || a == dist) p.T[a] = R * p.T[a];
      else {
        p.T[a] = Vec2::Constant(nan);
        p.nu(a) = nan;
      }
    }
  }
  c.data.has_frame = false;
  c.params.theta = theta;
  c.params.hyperbolic = eh(0) * eh(1) < 0;
  c.params.ehat3 = eh(2);
  c.params.H = H;
  c.params.H_target = lp.H;
  return c;
}

} // namespace

Correspondence daniel_transform(const FundamentalData &d, double theta, double cmc_tol) {
  Dim4Params src = dim4_params(d.model);
  double H = cmc_value(d, cmc_tol);
  bool hyp = d.timelike();
  LawsonParams lp = lawson_params(H, src.tau, theta, d.ehat(2), hyp);
  if (std::abs(lp.tau) < 1e-12 * std::max(1.0, std::abs(src.tau))) lp.tau = 0.0;
  Dim4Params tgt = src;
  tgt.tau = lp.tau;
  // Riemannian families keep kappa - 4 tau^2, Lorentzian ones kappa + 4 tau^2.
  if (src.family == Family::EKT) tgt.kappa = src.kappa - 4 * src.tau * src.tau + 4 * lp.tau * lp.tau;
  else tgt.kappa = src.kappa + 4 * src.tau * src.tau - 4 * lp.tau * lp.tau;
  Correspondence c = rotate(d, theta, H, lp, false, src.dist);
  c.params.source = src;
  c.params.target = tgt;
  if (std::abs(tgt.tau) > 1e-12) {
    Model tm = make_dim4_model(tgt.family, tgt.kappa, tgt.tau);
    tgt.dist = tm.dist;
    c.params.target = tgt;
    c.data.model = tm;
  }
  return c;
}

double twin_theta(double H) { return -2.0 * std::atan(H); }

Correspondence twin_s3(const FundamentalData &d, double cmc_tol) {
  const Model &m = d.model;
  if (!((m.c - Vec3::Constant(2.0)).cwiseAbs().maxCoeff() < 1e-12 && m.riemannian()))
    throw math_error("twin immersions need the round sphere model c=(2,2,2)");
  double H = cmc_value(d, cmc_tol);
  if (std::abs(H) < 1e-12) throw math_error("H = 0: the twin is the identity");
  double theta = twin_theta(H);
  LawsonParams lp = lawson_params(H, 1.0, theta, 1.0, false);
  Correspondence c = rotate(d, theta, H, lp, true, 2);
  c.params.source = Dim4Params{Family::EKT, 4.0, 1.0, 2};
  c.params.target = c.params.source;
  return c;
}

} // namespace mlg
