#include "mlg/surface.hpp"

#include <algorithm>
#include <cmath>

namespace mlg {

double ResidualReport::max_of(const std::string &prefix) const {
  double m = 0.0;
  for (const auto &e : entries)
    if (e.name.rfind(prefix, 0) == 0 && std::isfinite(e.max)) m = std::max(m, e.max);
  return m;
}

const ResidualEntry *ResidualReport::find(const std::string &name) const {
  for (const auto &e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

void ResidualReport::add(const std::string &name, const std::vector<double> &vals, const Grid &g, int band) {
  ResidualEntry e{name, 0.0, 0.0};
  std::size_t n = 0;
  double sq = 0.0;
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      if (!g.interior(i, j, band)) continue;
      double v = std::abs(vals[g.idx(i, j)]);
      if (!std::isfinite(v)) continue;
      e.max = std::max(e.max, v);
      sq += v * v;
      ++n;
    }
  e.rms = n ? std::sqrt(sq / n) : 0.0;
  entries.push_back(e);
}

double max_residual(const ResidualReport &r) {
  double m = 0.0;
  for (const auto &e : r.entries)
    if (std::isfinite(e.max)) m = std::max(m, e.max);
  return m;
}

namespace {

inline int nx(int a, int s) { return (a + s) % 3; }

std::vector<double> angle(const FundamentalData &d, int a) {
  std::vector<double> f(d.pts.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = d.pts[k].nu(a);
  return f;
}

std::vector<Vec2> tangent(const FundamentalData &d, int a) {
  std::vector<Vec2> f(d.pts.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = d.pts[k].T[a];
  return f;
}

Vec2 aux_T(const Model &m, const PointData &p) {
  Vec2 t = Vec2::Zero();
  for (int a = 0; a < 3; ++a) t += m.a(a) * p.nu(a) * p.T[a];
  return t;
}

} // namespace

ResidualReport compatibility_residuals(const FundamentalData &d, int band, int order) {
  const Model &m = d.model;
  const Grid &g = d.grid;
  const Vec3 &eh = d.ehat;
  SurfaceCalculus sc(d, order);
  const FrameAlgebra &alg = sc.alg();
  std::size_t n = g.size();
  ResidualReport rep;

  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const PointData &p = d.pts[k];
    double rhs = eh(2) * p.S.determinant();
    for (int a = 0; a < 3; ++a) rhs -= eh(0) * eh(1) * m.a(a) * p.nu(a) * p.nu(a);
    r[k] = p.K - rhs;
  }
  rep.add("gauss", r, g, band);

  std::vector<Vec2> s1(n), s2(n);
  for (std::size_t k = 0; k < n; ++k) s1[k] = d.pts[k].S.col(0), s2[k] = d.pts[k].S.col(1);
  auto c1 = sc.covariant(s1), c2 = sc.covariant(s2);
  for (std::size_t k = 0; k < n; ++k) {
    const PointData &p = d.pts[k];
    Vec2 T = aux_T(m, p);
    Vec2 rhs = m.eps123() * (eh(0) * T(0) * Vec2(0, 1) - eh(1) * T(1) * Vec2(1, 0));
    r[k] = (c2[k].col(0) - c1[k].col(1) - p.S * sc.bracket(k) - rhs).norm();
  }
  rep.add("codazzi", r, g, band);

  for (std::size_t k = 0; k < n; ++k) {
    const PointData &p = d.pts[k];
    double e = 0.0, sum = 0.0;
    Vec2 lin = Vec2::Zero();
    for (int i = 0; i < 3; ++i) {
      sum += m.eps(i) * p.nu(i) * p.nu(i);
      lin += m.eps(i) * p.nu(i) * p.T[i];
      for (int j = i; j < 3; ++j)
        e = std::max(e, std::abs(alg.dot(p.T[i], p.T[j]) - ((i == j ? m.eps(i) : 0.0) - eh(2) * p.nu(i) * p.nu(j))));
    }
    r[k] = std::max({e, std::abs(sum - eh(2)), lin.norm()});
  }
  rep.add("algebraic", r, g, band);

  for (int a = 0; a < 3; ++a) {
    int b = nx(a, 1), c = nx(a, 2);
    auto cov = sc.covariant(tangent(d, a));
    for (std::size_t k = 0; k < n; ++k) {
      const PointData &p = d.pts[k];
      double e = 0.0;
      for (int col = 0; col < 2; ++col) {
        Vec2 rhs = eh(2) * p.nu(a) * p.S.col(col) +
                   m.eps(b) * m.eps(c) *
                       (m.mu(c) * eh(col) * p.T[c](col) * p.T[b] - m.mu(b) * eh(col) * p.T[b](col) * p.T[c]);
        e = std::max(e, (cov[k].col(col) - rhs).norm());
      }
      r[k] = e;
    }
    rep.add("nablaT" + std::to_string(a + 1), r, g, band);
  }

  for (int a = 0; a < 3; ++a) {
    int b = nx(a, 1), c = nx(a, 2);
    auto grad = sc.gradient(angle(d, a));
    for (std::size_t k = 0; k < n; ++k) {
      const PointData &p = d.pts[k];
      Vec2 rhs = -p.S * p.T[a] + m.eps(b) * m.eps(c) * (m.mu(c) * p.nu(b) * p.T[c] - m.mu(b) * p.nu(c) * p.T[b]);
      r[k] = (grad[k] - rhs).norm();
    }
    rep.add("nablanu" + std::to_string(a + 1), r, g, band);
  }
  return rep;
}

std::vector<DerivedFields> derived_from_angles(const FundamentalData &d, int order) {
  const Model &m = d.model;
  const Vec3 &eh = d.ehat;
  SurfaceCalculus sc(d, order);
  Mat2 J = sc.alg().J();
  std::array<std::vector<Vec2>, 3> grad;
  for (int a = 0; a < 3; ++a) grad[a] = sc.gradient(angle(d, a));
  std::vector<DerivedFields> out(d.pts.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const PointData &p = d.pts[k];
    DerivedFields &f = out[k];
    for (int a = 0; a < 3; ++a) {
      int b = nx(a, 1), c = nx(a, 2);
      f.X[a] = J * grad[a][k] + m.eps(b) * m.eps(c) * (p.nu(c) * grad[b][k] - p.nu(b) * grad[c][k]);
      f.zeta += m.c(a) * p.nu(a) * p.nu(a);
    }
    int best = 0;
    double den = 0.0;
    for (int a = 0; a < 3; ++a) {
      double q = m.eps(a) - eh(2) * p.nu(a) * p.nu(a);
      if (std::abs(q) > std::abs(den)) den = q, best = a;
    }
    f.psi = sc.alg().dot(f.X[best], f.X[best]) / den;
    f.psi_formula = 4.0 * p.H * p.H * eh(0) * eh(1) + f.zeta * f.zeta;
    f.T = aux_T(m, p);
  }
  return out;
}

std::vector<DerivedFields> derived_fields(const FundamentalData &d, int order) { return derived_from_angles(d, order); }

ResidualReport lemma_xi_residuals(const FundamentalData &d, int band, int order) {
  const Model &m = d.model;
  const Vec3 &eh = d.ehat;
  auto df = derived_from_angles(d, order);
  SurfaceCalculus sc(d, order);
  const FrameAlgebra &alg = sc.alg();
  Mat2 J = alg.J();
  std::array<std::vector<Vec2>, 3> grad;
  for (int a = 0; a < 3; ++a) grad[a] = sc.gradient(angle(d, a));
  std::size_t n = d.pts.size();
  std::vector<double> ra(n), rb(n), rc1(n), rc2(n), rc3(n);
  for (std::size_t k = 0; k < n; ++k) {
    const PointData &p = d.pts[k];
    const DerivedFields &f = df[k];
    double ea = 0.0, eb = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (int a = 0; a < 3; ++a) {
      double qa = m.eps(a) - eh(2) * p.nu(a) * p.nu(a);
      for (int b = 0; b < 3; ++b) {
        double qb = m.eps(b) - eh(2) * p.nu(b) * p.nu(b);
        ea = std::max(ea, std::abs(qb * alg.dot(f.X[a], f.X[a]) - qa * alg.dot(f.X[b], f.X[b])));
        double want = ((a == b ? m.eps(a) : 0.0) - eh(2) * p.nu(a) * p.nu(b)) * f.psi;
        eb = std::max(eb, std::abs(alg.dot(f.X[a], f.X[b]) - want));
      }
      s1 += m.eps(a) * alg.dot(f.X[a], f.X[a]);
      s2 += m.eps(a) * alg.dot(f.X[a], grad[a][k]);
      s3 += m.eps(a) * alg.dot(f.X[a], J * grad[a][k]);
    }
    ra[k] = ea;
    rb[k] = eb;
    rc1[k] = s1 - 2.0 * f.psi;
    rc2[k] = s2;
    rc3[k] = s3 - f.psi;
  }
  ResidualReport rep;
  rep.add("xi_a", ra, d.grid, band);
  rep.add("xi_b", rb, d.grid, band);
  rep.add("xi_c_norms", rc1, d.grid, band);
  rep.add("xi_c_grad", rc2, d.grid, band);
  rep.add("xi_c_jgrad", rc3, d.grid, band);
  return rep;
}

std::vector<ShapeCandidate> shape_from_T_nu(const FundamentalData &d, int order) {
  const Model &m = d.model;
  const Vec3 &eh = d.ehat;
  SurfaceCalculus sc(d, order);
  const FrameAlgebra &alg = sc.alg();
  Mat2 J = alg.J();
  std::array<std::vector<Vec2>, 3> dnu, grad;
  for (int a = 0; a < 3; ++a) {
    dnu[a] = sc.frame_d(angle(d, a));
    grad[a] = sc.gradient(angle(d, a));
  }
  std::vector<ShapeCandidate> out(d.pts.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const PointData &p = d.pts[k];
    Mat2 S = Mat2::Zero();
    double defect = 0.0;
    for (int a = 0; a < 3; ++a) {
      Vec2 JT = J * p.T[a];
      for (int col = 0; col < 2; ++col)
        S.col(col) += m.eps(a) * (m.mu(a) * eh(col) * p.T[a](col) * JT - dnu[a][k](col) * p.T[a]);
      defect += m.eps(a) * alg.dot(grad[a][k], JT) + m.eps123() * m.c(a) * p.nu(a) * p.nu(a);
    }
    out[k].S = S;
    out[k].defect = defect;
    out[k].asym = std::abs(eh(1) * S(1, 0) - eh(0) * S(0, 1));
  }
  return out;
}

ResidualReport divergence_identities(const FundamentalData &d, int band, int order) {
  const Model &m = d.model;
  SurfaceCalculus sc(d, order);
  Mat2 J = sc.alg().J();
  auto T3 = tangent(d, 2);
  std::vector<Vec2> JT3(T3.size());
  for (std::size_t k = 0; k < T3.size(); ++k) JT3[k] = J * T3[k];
  auto c1 = sc.covariant(T3), c2 = sc.covariant(JT3);
  std::vector<double> r1(T3.size()), r2(T3.size());
  for (std::size_t k = 0; k < T3.size(); ++k) {
    const PointData &p = d.pts[k];
    r1[k] = c1[k].trace() - (2.0 * p.H * p.nu(2) + (m.c(1) - m.c(0)) * p.nu(0) * p.nu(1));
    r2[k] = c2[k].trace() - m.c(2) * p.nu(2);
  }
  ResidualReport rep;
  rep.add("divT3", r1, d.grid, band);
  rep.add("divJT3", r2, d.grid, band);
  return rep;
}

std::vector<double> companion_residual(const FundamentalData &d, int order, double hmin) {
  const Model &m = d.model;
  SurfaceCalculus sc(d, order);
  Mat2 J = sc.alg().J();
  auto df = derived_from_angles(d, order);
  std::size_t n = d.pts.size();
  std::vector<double> logH(n), zeta(n);
  for (std::size_t k = 0; k < n; ++k) {
    logH[k] = std::log(std::max(std::abs(d.pts[k].H), 1e-300));
    zeta[k] = df[k].zeta;
  }
  auto gl = sc.gradient(logH), gz = sc.gradient(zeta);
  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(d.pts[k].H) < hmin) {
      r[k] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    Vec2 v = zeta[k] * gl[k] - gz[k];
    for (int a = 0; a < 3; ++a) v -= m.eps(a) * m.mu(a) * d.pts[k].nu(a) * (J * df[k].X[a]);
    r[k] = v.norm();
  }
  return r;
}

Dim4Params dim4_params(const Model &m) {
  if (m.family == Family::None) throw math_error("model has no 4-dimensional isometry family");
  return Dim4Params{m.family, m.kappa, m.tau, m.dist};
}

double dim4_g0(const Dim4Params &p) { return p.family == Family::EKT ? p.tau * p.tau : -p.tau * p.tau; }

double dim4_g1(const Dim4Params &p, double ehat3) {
  switch (p.family) {
  case Family::EKT: return ehat3 * (p.kappa - 4 * p.tau * p.tau);
  case Family::LKT: return -ehat3 * (p.kappa + 4 * p.tau * p.tau);
  case Family::LKT_HAT: return ehat3 * (p.kappa + 4 * p.tau * p.tau);
  default: throw math_error("no family");
  }
}

double dim4_eps_d(const Dim4Params &p) { return p.family == Family::LKT ? -1.0 : 1.0; }

ResidualReport dim4_residuals(const FundamentalData &d, const Dim4Params &p, int band, int order) {
  const Grid &g = d.grid;
  const Vec3 &eh = d.ehat;
  const int dd = p.dist;
  SurfaceCalculus sc(d, order);
  const FrameAlgebra &alg = sc.alg();
  Mat2 J = alg.J();
  double g0 = dim4_g0(p), g1 = dim4_g1(p, eh(2)), ed = dim4_eps_d(p), tau = p.tau;
  std::size_t n = g.size();
  ResidualReport rep;
  std::vector<double> r(n);

  for (std::size_t k = 0; k < n; ++k) {
    const PointData &q = d.pts[k];
    r[k] = q.K - (eh(2) * q.S.determinant() + g0 + g1 * q.nu(dd) * q.nu(dd));
  }
  rep.add("gauss*", r, g, band);

  std::vector<Vec2> s1(n), s2(n);
  for (std::size_t k = 0; k < n; ++k) s1[k] = d.pts[k].S.col(0), s2[k] = d.pts[k].S.col(1);
  auto c1 = sc.covariant(s1), c2 = sc.covariant(s2);
  for (std::size_t k = 0; k < n; ++k) {
    const PointData &q = d.pts[k];
    const Vec2 &T = q.T[dd];
    // X = e1, Y = e2
    Vec2 rhs = g1 * eh(2) * q.nu(dd) * (eh(1) * T(1) * Vec2(1, 0) - eh(0) * T(0) * Vec2(0, 1));
    r[k] = (c2[k].col(0) - c1[k].col(1) - q.S * sc.bracket(k) - rhs).norm();
  }
  rep.add("codazzi*", r, g, band);

  for (std::size_t k = 0; k < n; ++k) {
    const PointData &q = d.pts[k];
    r[k] = alg.dot(q.T[dd], q.T[dd]) - (ed - eh(2) * q.nu(dd) * q.nu(dd));
  }
  rep.add("algebraic*", r, g, band);

  auto cov = sc.covariant(tangent(d, dd));
  for (std::size_t k = 0; k < n; ++k) {
    const PointData &q = d.pts[k];
    double e = 0.0;
    for (int col = 0; col < 2; ++col) {
      Vec2 X = Vec2::Unit(col);
      Vec2 rhs = eh(2) * q.nu(dd) * (q.S.col(col) - tau * (J * X));
      e = std::max(e, (cov[k].col(col) - rhs).norm());
    }
    r[k] = e;
  }
  rep.add("nablaT*", r, g, band);

  auto grad = sc.gradient(angle(d, dd));
  for (std::size_t k = 0; k < n; ++k) {
    const PointData &q = d.pts[k];
    r[k] = (grad[k] - (-q.S * q.T[dd] - tau * (J * q.T[dd]))).norm();
  }
  rep.add("nablanu*", r, g, band);
  return rep;
}

} // namespace mlg
