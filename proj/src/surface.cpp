#include "mlg/surface.hpp"

#include <cmath>

namespace mlg {

Jet SurfacePatch::eval(double u, double v) const {
  if (jet) return jet(u, v);
  if (!position) throw data_error("surface patch has no position map");
  static constexpr int off[4] = {-2, -1, 1, 2};
  static constexpr double w1[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  static constexpr double w2[4] = {-1.0 / 12, 16.0 / 12, 16.0 / 12, -1.0 / 12};
  Jet j;
  j.p = position(u, v);
  j.pu = j.pv = j.puu = j.pvv = j.puv = Vec3::Zero();
  for (int k = 0; k < 4; ++k) {
    Vec3 fu = position(u + off[k] * h, v), fv = position(u, v + off[k] * h);
    j.pu += w1[k] * fu;
    j.pv += w1[k] * fv;
    j.puu += w2[k] * fu;
    j.pvv += w2[k] * fv;
    for (int l = 0; l < 4; ++l) j.puv += w1[k] * w1[l] * position(u + off[k] * h, v + off[l] * h);
  }
  j.pu /= h;
  j.pv /= h;
  j.puu = (j.puu - 2.5 * j.p) / (h * h);
  j.pvv = (j.pvv - 2.5 * j.p) / (h * h);
  j.puv /= h * h;
  return j;
}

GridSurface sample(const SurfacePatch &patch, const Grid &g) {
  GridSurface s{patch.model, g, std::vector<Vec3>(g.size())};
  parallel_for(g.size(), [&](std::size_t k) {
    int i = static_cast<int>(k % g.nu), j = static_cast<int>(k / g.nu);
    s.pos[k] = patch.position ? patch.position(g.u(i), g.v(j)) : patch.jet(g.u(i), g.v(j)).p;
  });
  return s;
}

std::vector<Jet> grid_jets(const GridSurface &s) {
  for (std::size_t k = 0; k < s.pos.size(); ++k)
    if (!s.pos[k].allFinite())
      throw data_error("non-finite position at grid row " + std::to_string(k));
  auto pu = grid_diff(s.grid, s.pos, 0, 4);
  auto pv = grid_diff(s.grid, s.pos, 1, 4);
  auto puu = grid_diff(s.grid, s.pos, 0, 4, true);
  auto pvv = grid_diff(s.grid, s.pos, 1, 4, true);
  auto puv = grid_diff(s.grid, pv, 0, 4);
  std::vector<Jet> out(s.pos.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = Jet{s.pos[k], pu[k], pv[k], puu[k], puv[k], pvv[k]};
  return out;
}

AdaptedFrame adapted_frame(const Model &m, const Jet &j) {
  Frame f = frame_at(m, j.p);
  Vec3 U = f.Binv * j.pu, V = f.Binv * j.pv;
  double g11 = inner_E(m, U, U), g12 = inner_E(m, U, V), g22 = inner_E(m, V, V);
  double scale = std::max({1e-300, U.squaredNorm(), V.squaredNorm()});
  if (std::abs(g11 * g22 - g12 * g12) < 1e-14 * scale * scale) throw data_error("degenerate induced metric");
  if (g11 <= 1e-14 * scale) throw data_error("d/du is not spacelike (lightlike or timelike tie-break)");
  AdaptedFrame a;
  double n1 = std::sqrt(g11);
  a.e1 = U / n1;
  Vec3 W = V - (g12 / g11) * U;
  double w2 = inner_E(m, W, W);
  double n2 = std::sqrt(std::abs(w2));
  a.e2 = W / n2;
  double eh2 = w2 > 0 ? 1.0 : -1.0;
  double eh3 = m.eps123() * eh2;
  a.ehat = Vec3(1.0, eh2, eh3);
  a.N = eh3 * cross_E(m, a.e1, a.e2);
  a.P << 1.0 / n1, 0.0, -(g12 / g11) / n2, 1.0 / n2;
  return a;
}

AdaptedFrame adapted_frame(const SurfacePatch &patch, double u, double v) {
  return adapted_frame(patch.model, patch.eval(u, v));
}

Mat2 first_fundamental_form(const SurfacePatch &patch, double u, double v) {
  Jet j = patch.eval(u, v);
  Mat3 g = metric_at(patch.model, j.p);
  Mat2 I;
  I(0, 0) = j.pu.dot(g * j.pu);
  I(0, 1) = I(1, 0) = j.pu.dot(g * j.pv);
  I(1, 1) = j.pv.dot(g * j.pv);
  if (std::abs(I.determinant()) < 1e-14 * std::max(1.0, I.squaredNorm())) throw data_error("degenerate induced metric");
  return I;
}

PointData extract_point(const Model &m, const Jet &j) {
  AdaptedFrame a = adapted_frame(m, j);
  Frame f = frame_at(m, j.p);
  auto dB = dBinv_at(m, j.p);
  PointData d;
  d.pos = j.p;
  d.P = a.P;
  d.M.col(0) = a.e1;
  d.M.col(1) = a.e2;
  d.M.col(2) = a.N;
  const Vec3 &eh = a.ehat;
  for (int al = 0; al < 3; ++al) {
    d.nu(al) = m.eps(al) * a.N(al);
    for (int k = 0; k < 2; ++k) d.T[al](k) = eh(k) * m.eps(al) * d.M(al, k);
  }
  // Second fundamental form in coordinates: h_ab = <nabla_{phi_a} phi_b, N>.
  const Vec3 *first[2] = {&j.pu, &j.pv};
  Vec3 pab[2][2] = {{j.puu, j.puv}, {j.puv, j.pvv}};
  Mat2 h;
  for (int a1 = 0; a1 < 2; ++a1) {
    Vec3 A = f.Binv * *first[a1];
    Mat3 dBa = (*first[a1])(0) * dB[0] + (*first[a1])(1) * dB[1] + (*first[a1])(2) * dB[2];
    for (int b1 = 0; b1 < 2; ++b1) {
      Vec3 Bv = f.Binv * *first[b1];
      Vec3 cov = dBa * *first[b1] + f.Binv * pab[a1][b1] + nabla_E(m, A, Bv);
      h(a1, b1) = inner_E(m, cov, a.N);
    }
  }
  Mat2 cov = a.P * h * a.P.transpose();
  cov = 0.5 * (cov + cov.transpose());
  FrameAlgebra alg{eh};
  d.S = alg.from_covariant(cov);
  d.H = eh(2) / 2 * d.S.trace();
  return d;
}

namespace {

FundamentalData extract_from_jets(const Model &m, const Grid &g, const std::vector<Jet> &jets) {
  FundamentalData d;
  d.model = m;
  d.grid = g;
  d.has_frame = true;
  d.pts.resize(g.size());
  std::vector<Vec3> signs(g.size());
  std::string err;
  parallel_for(g.size(), [&](std::size_t k) {
    try {
      d.pts[k] = extract_point(m, jets[k]);
      signs[k] = adapted_frame(m, jets[k]).ehat;
    } catch (const Error &) {
      signs[k] = Vec3::Zero();
    }
  });
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (signs[k].isZero()) {
      int i = static_cast<int>(k % g.nu), j = static_cast<int>(k / g.nu);
      throw data_error("degenerate or invalid point at (u,v)=(" + std::to_string(g.u(i)) + "," + std::to_string(g.v(j)) +
                       ") row " + std::to_string(k));
    }
    if (signs[k] != signs[0]) throw data_error("causal character changes across the patch");
  }
  d.ehat = signs[0];
  fill_intrinsic_curvature(d);
  return d;
}

} // namespace

FundamentalData extract_fundamental_data(const SurfacePatch &patch, const Grid &g) {
  std::vector<Jet> jets(g.size());
  parallel_for(g.size(), [&](std::size_t k) {
    int i = static_cast<int>(k % g.nu), j = static_cast<int>(k / g.nu);
    jets[k] = patch.eval(g.u(i), g.v(j));
  });
  return extract_from_jets(patch.model, g, jets);
}

FundamentalData extract_fundamental_data(const GridSurface &s) { return extract_from_jets(s.model, s.grid, grid_jets(s)); }

void fill_intrinsic_curvature(FundamentalData &d, int order) {
  const Grid &g = d.grid;
  std::vector<double> E(g.size()), F(g.size()), G(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    Mat2 Q = d.pts[k].P.inverse();
    Mat2 met = Q * d.ehat.head<2>().asDiagonal() * Q.transpose();
    E[k] = met(0, 0);
    F[k] = met(0, 1);
    G[k] = met(1, 1);
  }
  if (g.nu < 4 || g.nv < 4) return;
  auto Eu = grid_diff(g, E, 0, order), Ev = grid_diff(g, E, 1, order);
  auto Fu = grid_diff(g, F, 0, order), Fv = grid_diff(g, F, 1, order);
  auto Gu = grid_diff(g, G, 0, order), Gv = grid_diff(g, G, 1, order);
  auto Evv = grid_diff(g, E, 1, order, true), Guu = grid_diff(g, G, 0, order, true);
  auto Fuv = grid_diff(g, Fv, 0, order);
  for (std::size_t k = 0; k < g.size(); ++k) {
    Mat3 A, B;
    A << -0.5 * Evv[k] + Fuv[k] - 0.5 * Guu[k], 0.5 * Eu[k], Fu[k] - 0.5 * Ev[k],
         Fv[k] - 0.5 * Gu[k], E[k], F[k],
         0.5 * Gv[k], F[k], G[k];
    B << 0, 0.5 * Ev[k], 0.5 * Gu[k],
         0.5 * Ev[k], E[k], F[k],
         0.5 * Gu[k], F[k], G[k];
    double den = E[k] * G[k] - F[k] * F[k];
    d.pts[k].K = (A.determinant() - B.determinant()) / (den * den);
  }
}

Mat2 FrameAlgebra::covariant(const Mat2 &op) const {
  Mat2 c;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) c(k, l) = ehat(l) * op(l, k);
  return c;
}

Mat2 FrameAlgebra::from_covariant(const Mat2 &cov) const {
  Mat2 op;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) op(l, k) = ehat(l) * cov(k, l);
  return op;
}

SurfaceCalculus::SurfaceCalculus(const FundamentalData &d, int order) : d_(d), order_(order), alg_{d.ehat} {
  const Grid &g = d.grid;
  std::vector<Mat2> P(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) P[k] = d.pts[k].P;
  auto Pu = grid_diff(g, P, 0, order), Pv = grid_diff(g, P, 1, order);
  om12_.resize(g.size());
  br_.resize(g.size());
  double s = d.ehat(0) * d.ehat(1);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Mat2 &p = P[k];
    Vec2 w;
    for (int a = 0; a < 2; ++a) {
      double e1P2 = p(0, 0) * Pu[k](1, a) + p(0, 1) * Pv[k](1, a);
      double e2P1 = p(1, 0) * Pu[k](0, a) + p(1, 1) * Pv[k](0, a);
      w(a) = e1P2 - e2P1;
    }
    Vec2 x = p.transpose().partialPivLu().solve(w);
    br_[k] = x;
    om12_[k] = Vec2(x(0), s * x(1));
  }
}

std::vector<Vec2> SurfaceCalculus::frame_d(const std::vector<double> &f) const {
  const Grid &g = d_.grid;
  auto fu = grid_diff(g, f, 0, order_), fv = grid_diff(g, f, 1, order_);
  std::vector<Vec2> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = d_.pts[k].P * Vec2(fu[k], fv[k]);
  return out;
}

std::vector<Vec2> SurfaceCalculus::gradient(const std::vector<double> &f) const {
  auto df = frame_d(f);
  for (auto &x : df) x = x.cwiseProduct(d_.ehat.head<2>());
  return df;
}

std::vector<Mat2> SurfaceCalculus::covariant(const std::vector<Vec2> &y) const {
  std::size_t n = y.size();
  std::vector<double> y1(n), y2(n);
  for (std::size_t k = 0; k < n; ++k) y1[k] = y[k](0), y2[k] = y[k](1);
  auto d1 = frame_d(y1), d2 = frame_d(y2);
  double s = d_.ehat(0) * d_.ehat(1);
  std::vector<Mat2> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int c = 0; c < 2; ++c) {
      double w12 = om12_[k](c), w21 = -s * w12;
      out[k](0, c) = d1[k](c) + y2[k] * w12;
      out[k](1, c) = d2[k](c) + y1[k] * w21;
    }
  }
  return out;
}

} // namespace mlg
