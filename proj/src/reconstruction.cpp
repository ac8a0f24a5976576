#include "mlg/reconstruction.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace mlg {

namespace {

double eps_dot(const Vec3 &s, const Vec3 &a, const Vec3 &b) { return a.cwiseProduct(s).dot(b); }

// Visits (i,j) lines of the comb: first the seed line through (0,0), then the transverse lines.
template <class Step> void comb(const Grid &g, Sweep sweep, Step step) {
  if (sweep == Sweep::RowFirst) {
    for (int i = 0; i + 1 < g.nu; ++i) step(0, i, 0);
    for (int i = 0; i < g.nu; ++i)
      for (int j = 0; j + 1 < g.nv; ++j) step(1, i, j);
  } else {
    for (int j = 0; j + 1 < g.nv; ++j) step(1, 0, j);
    for (int j = 0; j < g.nv; ++j)
      for (int i = 0; i + 1 < g.nu; ++i) step(0, i, j);
  }
}

} // namespace

FrameField build_M_from_T(FundamentalData &d, double tol) {
  const Model &m = d.model;
  const Vec3 &eh = d.ehat;
  FrameField f{d.grid, std::vector<Mat3>(d.grid.size())};
  for (std::size_t k = 0; k < f.M.size(); ++k) {
    PointData &p = d.pts[k];
    Mat3 M = Mat3::Zero();
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 2; ++c) M(a, c) = m.eps(a) * eh(c) * p.T[a](c);
    Eigen::Matrix<double, 3, 2> C = M.leftCols(2);
    Mat2 gram = C.transpose() * m.eps.asDiagonal() * C;
    double err = (gram - Mat2(eh.head<2>().asDiagonal())).cwiseAbs().maxCoeff();
    if (!(err <= tol)) throw math_error("column-orthonormality violated (defect " + std::to_string(err) + " at row " +
                                        std::to_string(k) + ")");
    M.col(2) = eh(2) * cross_E(m, M.col(0), M.col(1));
    for (int a = 0; a < 3; ++a) p.nu(a) = m.eps(a) * M(a, 2);
    p.M = M;
    f.M[k] = M;
  }
  d.has_frame = true;
  return f;
}

Mat3 L_matrix(const Model &m, const Mat3 &M, const Vec2 &x) {
  Vec3 X = M.leftCols(2) * x;
  return -M.inverse() * connection_matrix(m, X) * M;
}

Mat3 omega_matrix(const Mat2 &S, double om12, const Vec3 &eh, int k) {
  Mat3 W = Mat3::Zero();
  W(0, 1) = om12;
  W(1, 0) = -eh(0) * eh(1) * om12;
  for (int j = 0; j < 2; ++j) {
    W(j, 2) = -S(j, k);
    W(2, j) = eh(2) * eh(j) * S(j, k);
  }
  return W;
}

namespace {

ThetaField theta_common(const FundamentalData &d, const std::vector<Mat3> &M, int order, double sym_tol) {
  const Vec3 &eh = d.ehat;
  SurfaceCalculus sc(d, order);
  ThetaField t{d.grid, {}, {}, {}, {}};
  std::size_t n = d.grid.size();
  t.on_e1.resize(n), t.on_e2.resize(n), t.on_u.resize(n), t.on_v.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const PointData &p = d.pts[k];
    double asym = std::abs(eh(1) * p.S(1, 0) - eh(0) * p.S(0, 1));
    if (!(asym <= sym_tol)) throw math_error("asymmetric S (defect " + std::to_string(asym) + " at row " + std::to_string(k) + ")");
    Mat3 th[2];
    for (int c = 0; c < 2; ++c)
      th[c] = omega_matrix(p.S, sc.om12(k)(c), eh, c) + L_matrix(d.model, M[k], Vec2::Unit(c));
    t.on_e1[k] = th[0];
    t.on_e2[k] = th[1];
    Mat2 Q = p.P.inverse();
    t.on_u[k] = Q(0, 0) * th[0] + Q(0, 1) * th[1];
    t.on_v[k] = Q(1, 0) * th[0] + Q(1, 1) * th[1];
  }
  return t;
}

} // namespace

ThetaField theta_field(const FundamentalData &d, const FrameField &M, int order, double sym_tol) {
  return theta_common(d, M.M, order, sym_tol);
}

Mat3 complete_row(const Model &m, const Vec3 &eh, int dist, const Vec3 &row) {
  int b = (dist + 1) % 3, c = (dist + 2) % 3;
  double nd = eps_dot(eh, row, row);
  Vec3 best = Vec3::Zero();
  double bestn = 0.0;
  for (int e = 0; e < 3; ++e) {
    Vec3 w = Vec3::Unit(e) - (eps_dot(eh, Vec3::Unit(e), row) / nd) * row;
    double n2 = eps_dot(eh, w, w);
    if (n2 * m.eps(b) > bestn) bestn = n2 * m.eps(b), best = w;
  }
  if (bestn <= 0.0) throw math_error("cannot complete distinguished row");
  Vec3 rb = best / std::sqrt(bestn);
  Vec3 rc = eh.cwiseProduct(row).cross(eh.cwiseProduct(rb));
  double nc = eps_dot(eh, rc, rc);
  if (nc * m.eps(c) <= 0.0) throw math_error("cannot complete distinguished row (signature)");
  rc /= std::sqrt(std::abs(nc));
  Mat3 M;
  M.row(dist) = row;
  M.row(b) = rb;
  M.row(c) = rc;
  if (M.determinant() < 0) M.row(c) = -rc;
  return M;
}

ThetaField theta_field_dim4(const FundamentalData &d, int dist, int order, double sym_tol) {
  const Model &m = d.model;
  std::vector<Mat3> M(d.grid.size());
  for (std::size_t k = 0; k < M.size(); ++k) {
    const PointData &p = d.pts[k];
    Vec3 row(m.eps(dist) * d.ehat(0) * p.T[dist](0), m.eps(dist) * d.ehat(1) * p.T[dist](1), m.eps(dist) * p.nu(dist));
    M[k] = complete_row(m, d.ehat, dist, row);
  }
  return theta_common(d, M, order, sym_tol);
}

IntegrabilityReport darboux_residual(const ThetaField &t, int band, int order) {
  const Grid &g = t.grid;
  auto Bu = grid_diff(g, t.on_v, 0, order);
  auto Av = grid_diff(g, t.on_u, 1, order);
  IntegrabilityReport r;
  r.darboux.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Mat3 &A = t.on_u[k], &B = t.on_v[k];
    r.darboux[k] = (Bu[k] - Av[k] + A * B - B * A).norm();
  }
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i)
      if (g.interior(i, j, band)) r.darboux_max = std::max(r.darboux_max, r.darboux[g.idx(i, j)]);
  return r;
}

std::array<double, 3> frame_equation_residual(const FrameField &f, const ThetaField &t, int band, int order) {
  const Grid &g = f.grid;
  auto Mu = grid_diff(g, f.M, 0, order), Mv = grid_diff(g, f.M, 1, order);
  std::array<double, 3> out{0, 0, 0};
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      if (!g.interior(i, j, band)) continue;
      std::size_t k = g.idx(i, j);
      Mat3 ru = Mu[k] - f.M[k] * t.on_u[k], rv = Mv[k] - f.M[k] * t.on_v[k];
      for (int c = 0; c < 3; ++c) out[c] = std::max({out[c], ru.col(c).norm(), rv.col(c).norm()});
    }
  return out;
}

Mat3 reorthonormalize(const Model &m, const Vec3 &eh, const Mat3 &M) {
  Vec3 c0 = M.col(0), c1 = M.col(1);
  double n0 = eps_dot(m.eps, c0, c0);
  c1 -= (eps_dot(m.eps, c1, c0) / n0) * c0;
  c0 /= std::sqrt(std::abs(n0));
  c1 /= std::sqrt(std::abs(eps_dot(m.eps, c1, c1)));
  Mat3 R;
  R.col(0) = c0;
  R.col(1) = c1;
  R.col(2) = eh(2) * cross_E(m, c0, c1);
  return R;
}

Mat3 expm_so3eps(const Mat3 &A) { return A.exp(); }

FrameField integrate_frame(const Model &m, const Vec3 &eh, const ThetaField &t, const Mat3 &M0, Sweep sweep) {
  const Grid &g = t.grid;
  Mat3 G = M0.transpose() * m.eps.asDiagonal() * M0;
  if ((G - Mat3(eh.asDiagonal())).cwiseAbs().maxCoeff() > 1e-8 || std::abs(M0.determinant() - 1.0) > 1e-8)
    throw math_error("initial frame is not in SO_3^eps");
  FrameField f{g, std::vector<Mat3>(g.size(), Mat3::Zero())};
  f.M[0] = M0;
  comb(g, sweep, [&](int axis, int i, int j) {
    std::size_t a = g.idx(i, j), b = axis == 0 ? g.idx(i + 1, j) : g.idx(i, j + 1);
    const auto &coef = axis == 0 ? t.on_u : t.on_v;
    int k = axis == 0 ? i : j, n = g.count(axis);
    std::function<Mat3(int)> at = [&](int s) { return coef[axis == 0 ? g.idx(s, j) : g.idx(i, s)]; };
    Mat3 Am = mid_interp(at, k, n);
    f.M[b] = reorthonormalize(m, eh, f.M[a] * expm_so3eps(g.step(axis) * Am));
    if (!f.M[b].allFinite()) throw integration_error("frame integration produced non-finite values");
  });
  return f;
}

std::vector<Vec3> integrate_position(const Model &m, const FrameField &f, const std::vector<Mat2> &P, const Vec3 &q0,
                                     Sweep sweep) {
  const Grid &g = f.grid;
  if (!in_domain(m, q0)) throw math_error("base point outside the model domain");
  std::vector<Vec3> Gu(g.size()), Gv(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    Mat2 Q = P[k].inverse();
    Gu[k] = f.M[k].leftCols(2) * Q.row(0).transpose();
    Gv[k] = f.M[k].leftCols(2) * Q.row(1).transpose();
  }
  std::vector<Vec3> pos(g.size(), Vec3::Zero());
  pos[0] = q0;
  auto vel = [&](const Vec3 &p, const Vec3 &w) {
    if (!in_domain(m, p)) throw integration_error("left the model domain (lambda <= 0) during integration");
    return Vec3(frame_at(m, p).B * w);
  };
  comb(g, sweep, [&](int axis, int i, int j) {
    std::size_t a = g.idx(i, j), b = axis == 0 ? g.idx(i + 1, j) : g.idx(i, j + 1);
    const auto &G = axis == 0 ? Gu : Gv;
    int k = axis == 0 ? i : j, n = g.count(axis);
    std::function<Vec3(int)> at = [&](int s) { return G[axis == 0 ? g.idx(s, j) : g.idx(i, s)]; };
    Vec3 wm = mid_interp(at, k, n);
    double h = g.step(axis);
    const Vec3 &y = pos[a];
    Vec3 k1 = vel(y, G[a]);
    Vec3 k2 = vel(y + 0.5 * h * k1, wm);
    Vec3 k3 = vel(y + 0.5 * h * k2, wm);
    Vec3 k4 = vel(y + h * k3, G[b]);
    pos[b] = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!in_domain(m, pos[b])) throw integration_error("left the model domain (lambda <= 0) during integration");
  });
  return pos;
}

double acceptance_tol(const Grid &g, const ReconstructionOptions &o) {
  if (o.tol > 0) return o.tol;
  double h = std::max(g.du, g.dv);
  return 100.0 * h * h;
}

namespace {

std::vector<Mat2> frames_of(const FundamentalData &d) {
  std::vector<Mat2> P(d.pts.size());
  for (std::size_t k = 0; k < P.size(); ++k) P[k] = d.pts[k].P;
  return P;
}

double path_gap(const std::vector<Vec3> &a, const std::vector<Vec3> &b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, (a[k] - b[k]).norm());
  return m;
}

} // namespace

Reconstruction reconstruct_from_T(const FundamentalData &in, const ReconstructionOptions &o) {
  Reconstruction r;
  r.data = in;
  FundamentalData &d = r.data;
  double tol = acceptance_tol(d.grid, o);
  FrameField M = build_M_from_T(d, o.check ? tol : 1e300);
  for (auto &Mk : M.M) Mk = reorthonormalize(d.model, d.ehat, Mk);
  auto cand = shape_from_T_nu(d, o.order);
  double defect = 0.0;
  for (std::size_t k = 0; k < cand.size(); ++k) {
    d.pts[k].S = cand[k].S;
    d.pts[k].H = d.ehat(2) / 2 * cand[k].S.trace();
    defect = std::max(defect, std::abs(cand[k].defect));
  }
  fill_intrinsic_curvature(d);
  r.diagnostics = compatibility_residuals(d, 2, 2);
  std::vector<double> dv(d.pts.size());
  for (std::size_t k = 0; k < dv.size(); ++k) dv[k] = cand[k].defect;
  r.diagnostics.add("symmetry_defect", dv, d.grid, 2);
  if (o.check) {
    const ResidualEntry *sd = r.diagnostics.find("symmetry_defect");
    if (sd->max > tol) throw math_error("S candidate is not self-adjoint (defect " + std::to_string(sd->max) + ")");
    for (int a = 1; a <= 3; ++a) {
      const ResidualEntry *e = r.diagnostics.find("nablaT" + std::to_string(a));
      if (e->max > tol)
        throw math_error("compatibility equation (iv) for T" + std::to_string(a) + " fails (residual " +
                         std::to_string(e->max) + " > " + std::to_string(tol) + ")");
    }
  }
  r.darboux = darboux_residual(theta_field(d, M, o.order, 1e300)).darboux_max;
  auto P = frames_of(d);
  auto pos = integrate_position(d.model, M, P, o.q0, Sweep::RowFirst);
  auto alt = integrate_position(d.model, M, P, o.q0, Sweep::ColumnFirst);
  r.path_gap = path_gap(pos, alt);
  r.frame = M;
  r.surface = GridSurface{d.model, d.grid, pos};
  return r;
}

void tangents_from_angles(FundamentalData &d, double h_sign, const std::vector<double> *H, int order) {
  const Model &m = d.model;
  const Vec3 &eh = d.ehat;
  for (std::size_t k = 0; k < d.pts.size(); ++k) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += m.eps(a) * d.pts[k].nu(a) * d.pts[k].nu(a);
    if (std::abs(s - eh(2)) > 1e-8)
      throw data_error("angles violate sum eps nu^2 = ehat3 at row " + std::to_string(k));
  }
  auto df = derived_from_angles(d, order);
  Mat2 J = FrameAlgebra{eh}.J();
  double scale = 0.0;
  for (const auto &f : df) scale = std::max(scale, std::abs(f.psi));
  for (std::size_t k = 0; k < d.pts.size(); ++k) {
    const DerivedFields &f = df[k];
    if (std::abs(f.psi) <= 1e-10 * std::max(1.0, scale))
      throw math_error("psi vanishes at row " + std::to_string(k) +
                       ": constant-angle case (the surface lies in a left coset of a 2-dimensional subgroup)");
    double h2 = eh(0) * eh(1) * (f.psi - f.zeta * f.zeta) / 4.0;
    if (eh(0) * eh(1) < 0 && std::abs(f.psi) < 1e-10) throw math_error("lightlike X fields are not supported");
    double Hk;
    if (H) {
      Hk = (*H)[k];
      if (std::abs(4 * Hk * Hk * eh(0) * eh(1) + f.zeta * f.zeta - f.psi) > 1e-6 * std::max(1.0, std::abs(f.psi)))
        throw math_error("prescribed H is inconsistent with psi = 4 H^2 ehat1 ehat2 + zeta^2");
    } else {
      if (h2 < -1e-5 * std::max(1.0, std::abs(f.psi))) throw math_error("H-sign branch inconsistent: ehat1 ehat2 (psi - zeta^2) < 0");
      Hk = h_sign * std::sqrt(std::max(0.0, h2));
    }
    PointData &p = d.pts[k];
    p.H = Hk;
    for (int a = 0; a < 3; ++a)
      p.T[a] = (m.eps123() * f.zeta / f.psi) * f.X[a] + (2.0 * Hk * eh(2) / f.psi) * (J * f.X[a]);
  }
}

Reconstruction reconstruct_from_angles(const FundamentalData &in, double h_sign, const ReconstructionOptions &o,
                                       const std::vector<double> *H) {
  FundamentalData d = in;
  tangents_from_angles(d, h_sign, H, o.order);
  return reconstruct_from_T(d, o);
}

Reconstruction reconstruct_dim4(const FundamentalData &in, const Dim4Params &p, const ReconstructionOptions &o,
                                std::optional<Mat3> M0) {
  Reconstruction r;
  r.data = in;
  FundamentalData &d = r.data;
  const Model &m = d.model;
  if (m.family != p.family) throw math_error("wrong family for this model");
  int dd = p.dist;
  double tol = acceptance_tol(d.grid, o);
  FrameAlgebra alg{d.ehat};
  double ed = dim4_eps_d(p);
  for (std::size_t k = 0; k < d.pts.size(); ++k) {
    const PointData &q = d.pts[k];
    double e = alg.dot(q.T[dd], q.T[dd]) - (ed - d.ehat(2) * q.nu(dd) * q.nu(dd));
    if (std::abs(e) > std::max(tol, 1e-8))
      throw math_error("condition (iii*) violated at row " + std::to_string(k) + " (residual " + std::to_string(e) + ")");
  }
  if (!std::isfinite(d.pts[d.pts.size() / 2].K)) fill_intrinsic_curvature(d);
  r.diagnostics = dim4_residuals(d, p, 2, 2);
  if (o.check) {
    for (const char *name : {"gauss*", "codazzi*", "nablaT*", "nablanu*"}) {
      const ResidualEntry *e = r.diagnostics.find(name);
      if (e->max > tol)
        throw math_error(std::string("condition ") + name + " fails (residual " + std::to_string(e->max) + " > " +
                         std::to_string(tol) + ")");
    }
  }
  ThetaField th = theta_field_dim4(d, dd, o.order, o.check ? std::max(tol, 1e-6) : 1e300);
  r.darboux = darboux_residual(th).darboux_max;
  Mat3 start;
  if (M0) start = *M0;
  else {
    const PointData &q = d.pts[0];
    Vec3 row(m.eps(dd) * d.ehat(0) * q.T[dd](0), m.eps(dd) * d.ehat(1) * q.T[dd](1), m.eps(dd) * q.nu(dd));
    start = complete_row(m, d.ehat, dd, row);
  }
  FrameField M = integrate_frame(m, d.ehat, th, start, Sweep::RowFirst);
  FrameField Malt = integrate_frame(m, d.ehat, th, start, Sweep::ColumnFirst);
  double gap = 0.0;
  for (std::size_t k = 0; k < M.M.size(); ++k) gap = std::max(gap, (M.M[k] - Malt.M[k]).norm());
  auto P = frames_of(d);
  auto pos = integrate_position(m, M, P, o.q0, Sweep::RowFirst);
  r.path_gap = gap;
  for (std::size_t k = 0; k < d.pts.size(); ++k) {
    d.pts[k].M = M.M[k];
    for (int a = 0; a < 3; ++a) {
      d.pts[k].nu(a) = m.eps(a) * M.M[k](a, 2);
      for (int c = 0; c < 2; ++c) d.pts[k].T[a](c) = d.ehat(c) * m.eps(a) * M.M[k](a, c);
    }
  }
  r.frame = M;
  r.surface = GridSurface{m, d.grid, pos};
  return r;
}

} // namespace mlg
