#include "mlg/special.hpp"

#include <cmath>
#include <numbers>

namespace mlg {

Vec3 ConstantAngleSet::at(double t, unsigned signs) const {
  Vec3 w = w0 + t * (w1 - w0);
  Vec3 nu;
  for (int a = 0; a < 3; ++a) nu(a) = ((signs >> a) & 1u ? -1.0 : 1.0) * std::sqrt(std::max(w(a), 0.0));
  return nu;
}

namespace {

void push_unique(std::vector<Vec3> &out, const Vec3 &p) {
  for (const auto &q : out)
    if ((q - p).cwiseAbs().maxCoeff() < 1e-13) return;
  out.push_back(p);
}

std::vector<Vec3> sample_quadric(const Vec3 &eps, double ehat3, int n) {
  std::vector<Vec3> out;
  int neg = -1, cnt = 0;
  for (int a = 0; a < 3; ++a)
    if (eps(a) < 0) neg = a, ++cnt;
  const double pi = std::numbers::pi;
  if (cnt == 0) {
    if (ehat3 < 0) return out;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j < 2 * n; ++j) {
        double th = pi * i / n, ph = pi * j / n;
        push_unique(out, Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)));
      }
    return out;
  }
  int a1 = (neg + 1) % 3, a2 = (neg + 2) % 3;
  for (int i = -n; i <= n; ++i)
    for (int j = 0; j < 2 * n; ++j) {
      double s = 2.0 * i / n, ph = pi * j / n;
      Vec3 v;
      double ch = std::cosh(s), sh = std::sinh(s);
      if (ehat3 > 0) v(neg) = sh, v(a1) = ch * std::cos(ph), v(a2) = ch * std::sin(ph);
      else v(neg) = ch, v(a1) = sh * std::cos(ph), v(a2) = sh * std::sin(ph);
      push_unique(out, v);
    }
  return out;
}

} // namespace

std::vector<Vec3> ConstantAngleSet::sample(int n) const {
  std::vector<Vec3> out;
  if (kind == Kind::Empty) return out;
  if (kind == Kind::Sphere) return sample_quadric(eps, ehat3, n);
  Vec3 wmax = w0.cwiseMax(w1);
  int steps = kind == Kind::Points ? 0 : std::max(n, 1);
  for (unsigned s = 0; s < 8; ++s) {
    bool skip = false;
    for (int a = 0; a < 3; ++a)
      if (((s >> a) & 1u) && wmax(a) <= 0.0) skip = true;
    if (skip) continue;
    for (int i = 0; i <= steps; ++i) push_unique(out, at(steps ? double(i) / steps : 0.0, s));
  }
  return out;
}

ConstantAngleSet constant_angle_set(const Model &m, double ehat3, double cap) {
  ConstantAngleSet r;
  r.ehat3 = ehat3;
  r.eps = m.eps;
  const Vec3 &e = m.eps, &c = m.c;
  double cs = c.cwiseAbs().maxCoeff();
  if (cs == 0.0) {
    r.kind = ConstantAngleSet::Kind::Sphere;
    if (e.minCoeff() > 0 && ehat3 < 0) r.kind = ConstantAngleSet::Kind::Empty;
    return r;
  }
  Vec3 d = e.cross(c);
  if (d.norm() < 1e-14 * cs) return r; // c parallel to eps: sum c nu^2 is a nonzero multiple of ehat3
  Eigen::Matrix<double, 2, 3> A;
  A.row(0) = e.transpose();
  A.row(1) = c.transpose();
  Vec3 p = A.completeOrthogonalDecomposition().solve(Eigen::Vector2d(ehat3, 0.0));
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  const double tiny = 1e-14 * d.norm();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d(a)) <= tiny) {
      if (p(a) < -1e-13) return r;
      continue;
    }
    double t = -p(a) / d(a);
    if (d(a) > 0) lo = std::max(lo, t);
    else hi = std::min(hi, t);
  }
  double tcap = cap / d.norm();
  if (!std::isfinite(lo)) lo = -tcap, r.bounded = false;
  if (!std::isfinite(hi)) hi = tcap, r.bounded = false;
  if (hi < lo - 1e-13) return r;
  r.w0 = (p + lo * d).cwiseMax(0.0);
  r.w1 = (p + hi * d).cwiseMax(0.0);
  r.kind = (r.w1 - r.w0).norm() < 1e-12 ? ConstantAngleSet::Kind::Points : ConstantAngleSet::Kind::Curves;
  return r;
}

TotallyGeodesicResult totally_geodesic(const Model &m) {
  TotallyGeodesicResult r;
  Vec3 ec = m.eps.cwiseProduct(m.c);
  if (std::abs(ec(0) - ec(1)) < 1e-12 && std::abs(ec(1) - ec(2)) < 1e-12) {
    r.constant_curvature = true;
    return r;
  }
  std::vector<double> ehats{1.0};
  if (!m.riemannian()) ehats.push_back(-1.0);
  for (int k = 0; k < 3; ++k) {
    if (std::abs(m.mu(k)) > 1e-12) continue;
    int i = (k + 1) % 3, j = (k + 2) % 3;
    Mat2 A;
    A << m.c(i), m.c(j), m.eps(i), m.eps(j);
    if (std::abs(A.determinant()) < 1e-14) continue;
    for (double eh : ehats) {
      Vec2 w = A.inverse() * Vec2(0.0, eh);
      if (w.minCoeff() < -1e-14) continue;
      double ni = std::sqrt(std::max(w(0), 0.0)), nj = std::sqrt(std::max(w(1), 0.0));
      for (double s : {1.0, -1.0}) {
        if (s < 0 && nj == 0.0) break;
        GeodesicDistribution g;
        g.k = k;
        g.nu = Vec3::Zero();
        g.nu(i) = ni;
        g.nu(j) = s * nj;
        g.Y1 = Vec3::Zero();
        g.Y1(i) = g.nu(j);
        g.Y1(j) = -g.nu(i);
        g.Y2 = Vec3::Unit(k);
        r.distributions.push_back(g);
      }
    }
  }
  return r;
}

std::pair<Vec3, Vec3> spanning_fields(const Vec3 &nu) {
  if (std::abs(nu(2)) > 1e-12)
    return {Vec3(nu(2), 0.0, -nu(0)), Vec3(0.0, nu(2), -nu(1))};
  return {Vec3(nu(1), -nu(0), 0.0), Vec3(0.0, 0.0, 1.0)};
}

Vec3 flow(const Model &m, const Vec3 &Y, const Vec3 &p, double t, int steps) {
  auto f = [&](const Vec3 &q) -> Vec3 {
    if (!in_domain(m, q)) throw integration_error("flow exits the model domain");
    return frame_at(m, q).B * Y;
  };
  double h = t / steps;
  Vec3 q = p;
  for (int s = 0; s < steps; ++s) {
    Vec3 k1 = f(q), k2 = f(q + 0.5 * h * k1), k3 = f(q + 0.5 * h * k2), k4 = f(q + h * k3);
    q += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  if (!in_domain(m, q)) throw integration_error("flow exits the model domain");
  return q;
}

IntegralSurface integral_surface(const Model &m, const Vec3 &nu, const Vec3 &q0, const Grid &extent, double tol) {
  double s = inner_E(m, nu, nu);
  if (std::abs(std::abs(s) - 1.0) > tol || std::abs(m.c.dot(nu.cwiseProduct(nu))) > tol)
    throw math_error("nu is not in the constant-angle set");
  if (!in_domain(m, q0)) throw math_error("base point outside the model domain");
  auto [Y1, Y2] = spanning_fields(nu);
  IntegralSurface r;
  r.patch.model = m;
  r.patch.position = [m, Y1, Y2, q0](double u, double v) { return flow(m, Y2, flow(m, Y1, q0, u), v); };
  std::vector<double> gaps(extent.size());
  parallel_for(extent.size(), [&](std::size_t n) {
    int i = n % extent.nu, j = n / extent.nu;
    double u = extent.u(i), v = extent.v(j);
    Vec3 a = flow(m, Y2, flow(m, Y1, q0, u), v), b = flow(m, Y1, flow(m, Y2, q0, v), u);
    gaps[n] = (a - b).norm();
  });
  for (double g : gaps) r.commutativity_defect = std::max(r.commutativity_defect, g);
  return r;
}

VerticalCylinder vertical_cylinder(const Model &m, double r) {
  if (m.family != Family::EKT) throw math_error("vertical cylinders need an E(kappa,tau) model");
  double k = m.kappa, t = m.tau;
  if (t == 0.0) throw math_error("tau must be nonzero");
  if (r <= 0.0 || 4 + k * r * r <= 0.0) throw math_error("radius constraint 4 + kappa r^2 > 0 violated");
  VerticalCylinder c;
  double f = 4 * r / (4 + k * r * r);
  c.H = (-4 + k * r * r) / (8 * r);
  c.conformal = f * f;
  c.surface.model = m;
  c.companion.model = m;
  c.surface.position = [r, f, t](double u, double v) {
    return Vec3(r * std::cos(u), r * std::sin(u), f * (v + t * r * u));
  };
  if (k == 0.0) {
    c.companion.position = [r, f, t](double u, double v) {
      return Vec3(-r * std::cos(u), -r * std::sin(u), f * (-v + t * r * u));
    };
    return c;
  }
  double H = c.H, den = k * k + 16 * H * H * t * t;
  double a = (k * k - 16 * H * H * t * t) / den, b = 8 * H * k * t / den;
  c.companion.position = [r, f, t, a, b](double u, double v) {
    double ub = a * u - b * v, vb = b * u + a * v;
    return Vec3(-r * std::cos(ub), r * std::sin(ub), f * (vb - t * r * ub));
  };
  return c;
}

} // namespace mlg
