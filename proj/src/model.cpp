#include "mlg/model.hpp"

#include <cmath>

namespace mlg {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

GroupType classify_group(const Vec3 &c) {
  int pos = 0, neg = 0;
  for (int i = 0; i < 3; ++i) {
    pos += sgn(c(i)) > 0;
    neg += sgn(c(i)) < 0;
  }
  int nz = pos + neg;
  if (nz == 0) return GroupType::R3;
  if (nz == 1) return GroupType::Nil3;
  if (nz == 2) return (pos == 2 || neg == 2) ? GroupType::E2 : GroupType::Sol3;
  return (pos == 3 || neg == 3) ? GroupType::SU2 : GroupType::SL2;
}

void check_signature(const Vec3 &eps) {
  for (int i = 0; i < 3; ++i)
    if (eps(i) != 1.0 && eps(i) != -1.0) throw math_error("signature entries must be +1 or -1");
  if (eps(0) != 1.0 || eps(1) != 1.0) throw math_error("unsupported signature (use (1,1,1) or (1,1,-1))");
}

// Fills everything derived from c and eps.
void derive(Model &m) {
  const Vec3 &c = m.c, &e = m.eps;
  Vec3 ec = e.cwiseProduct(c);
  m.mu(0) = (-ec(0) + ec(1) + ec(2)) / 2;
  m.mu(1) = (ec(0) - ec(1) + ec(2)) / 2;
  m.mu(2) = (ec(0) + ec(1) - ec(2)) / 2;
  m.a(0) = e(0) * m.mu(1) * m.mu(2) - c(0) * m.mu(0);
  m.a(1) = e(1) * m.mu(0) * m.mu(2) - c(1) * m.mu(1);
  m.a(2) = e(2) * m.mu(0) * m.mu(1) - c(2) * m.mu(2);
  m.group = classify_group(c);
  m.global = is_global(m);

  m.iso_dim = 3;
  m.dist = -1;
  bool all_eq = close(ec(0), ec(1)) && close(ec(1), ec(2));
  if (all_eq) m.iso_dim = 6;
  for (int d = 0; d < 3 && m.iso_dim == 3; ++d) {
    int p = (d + 1) % 3, q = (d + 2) % 3;
    if (c(d) == 0.0 && close(ec(p), ec(q))) m.iso_dim = 6;
  }
  if (m.iso_dim == 6) return;
  for (int d = 0; d < 3; ++d) {
    int p = (d + 1) % 3, q = (d + 2) % 3;
    if (close(ec(p), ec(q)) && !close(ec(d), ec(p)) && ec(d) != 0.0) {
      m.iso_dim = 4;
      m.dist = d;
      m.tau = ec(d) / 2;
      m.kappa = 2 * m.tau * ec(p) * (m.riemannian() ? 1.0 : -1.0);
      if (m.riemannian()) m.family = Family::EKT;
      else m.family = e(d) < 0 ? Family::LKT : Family::LKT_HAT;
      return;
    }
  }
}

} // namespace

std::string to_string(GroupType g) {
  switch (g) {
  case GroupType::SU2: return "SU2";
  case GroupType::SL2: return "SL2";
  case GroupType::E2: return "E2";
  case GroupType::Sol3: return "Sol3";
  case GroupType::Nil3: return "Nil3";
  case GroupType::R3: return "R3";
  }
  return "?";
}

std::string to_string(Family f) {
  switch (f) {
  case Family::None: return "none";
  case Family::EKT: return "EKT";
  case Family::LKT: return "LKT";
  case Family::LKT_HAT: return "LKT_HAT";
  }
  return "?";
}

Family family_from_string(const std::string &s) {
  if (s == "EKT") return Family::EKT;
  if (s == "LKT") return Family::LKT;
  if (s == "LKT_HAT") return Family::LKT_HAT;
  throw parse_error("unknown family '" + s + "'");
}

Model make_model(const Vec3 &c, const Vec3 &eps) {
  if (!c.allFinite()) throw math_error("structure constants must be finite");
  check_signature(eps);
  Model m;
  m.c = c;
  m.eps = eps;
  derive(m);
  return m;
}

Model make_dim4_model(Family family, double kappa, double tau) {
  if (tau == 0.0) throw math_error("product-limit: tau = 0 gives no Lie group structure");
  Model m;
  double k2t = kappa / (2 * tau);
  switch (family) {
  case Family::EKT:
    m = make_model(Vec3(k2t, k2t, 2 * tau), Vec3(1, 1, 1));
    m.dist = 2;
    break;
  case Family::LKT:
    m = make_model(Vec3(-k2t, -k2t, -2 * tau), Vec3(1, 1, -1));
    m.dist = 2;
    break;
  case Family::LKT_HAT:
    // Published form c=(-k/2t, k/2t, 2t), eps=(1,-1,1); move the timelike index to position 3.
    m.c = Vec3(2 * tau, -k2t, k2t);
    m.eps = Vec3(1, 1, -1);
    derive(m);
    m.relabel = {2, 0, 1};
    m.dist = 0;
    break;
  default:
    throw math_error("make_dim4_model needs a family");
  }
  m.family = family;
  m.kappa = kappa;
  m.tau = tau;
  return m;
}

Model cyclic_relabel(const Model &m, int shift) {
  shift = ((shift % 3) + 3) % 3;
  Model r;
  for (int i = 0; i < 3; ++i) {
    int o = (i + shift) % 3;
    r.c(i) = m.c(o);
    r.eps(i) = m.eps(o);
    r.relabel[i] = m.relabel[o];
  }
  derive(r);
  if (m.family != Family::None) {
    r.family = m.family;
    r.kappa = m.kappa;
    r.tau = m.tau;
    r.dist = ((m.dist - shift) % 3 + 3) % 3;
  }
  return r;
}

std::pair<double, double> cs_eval(const Model &m, double z) {
  double k = m.c(0) * m.c(1);
  double t = k * z * z;
  if (std::abs(t) < 1e-4) {
    // alpha(t), beta(t) truncated; next terms are below 1e-20
    double al = 1 - t / 2 + t * t / 24 - t * t * t / 720 + t * t * t * t / 40320;
    double be = 1 - t / 6 + t * t / 120 - t * t * t / 5040 + t * t * t * t / 362880;
    return {al, z * be};
  }
  if (k > 0) {
    double r = std::sqrt(k);
    return {std::cos(r * z), std::sin(r * z) / r};
  }
  double r = std::sqrt(-k);
  return {std::cosh(r * z), std::sinh(r * z) / r};
}

double lambda_at(const Model &m, const Vec3 &p) {
  double den = 1 + m.c(2) / 4 * (m.c(1) * p(0) * p(0) + m.c(0) * p(1) * p(1));
  return den > 0 ? 1 / den : -1.0;
}

bool in_domain(const Model &m, const Vec3 &p) {
  return p.allFinite() && 1 + m.c(2) / 4 * (m.c(1) * p(0) * p(0) + m.c(0) * p(1) * p(1)) > 0;
}

Frame frame_at(const Model &m, const Vec3 &p) {
  if (!in_domain(m, p)) throw math_error("point outside model domain (lambda <= 0)");
  const double c1 = m.c(0), c2 = m.c(1), c3 = m.c(2);
  const double x = p(0), y = p(1);
  double lam = lambda_at(m, p);
  auto [cz, sz] = cs_eval(m, p(2));
  Frame f;
  f.B << cz / lam, -c1 * sz / lam, 0,
         c2 * sz / lam, cz / lam, 0,
         c3 / 2 * (c2 * x * sz - y * cz), c3 / 2 * (x * cz + c1 * y * sz), 1;
  f.Binv << lam * cz, c1 * lam * sz, 0,
            -c2 * lam * sz, lam * cz, 0,
            c3 / 2 * y * lam, -c3 / 2 * x * lam, 1;
  return f;
}

std::array<Mat3, 3> dBinv_at(const Model &m, const Vec3 &p) {
  const double c1 = m.c(0), c2 = m.c(1), c3 = m.c(2);
  const double x = p(0), y = p(1);
  double lam = lambda_at(m, p);
  auto [cz, sz] = cs_eval(m, p(2));
  double lx = -lam * lam * c3 / 2 * c2 * x;
  double ly = -lam * lam * c3 / 2 * c1 * y;
  double dc = -c1 * c2 * sz;
  std::array<Mat3, 3> d;
  d[0] << lx * cz, c1 * lx * sz, 0,
          -c2 * lx * sz, lx * cz, 0,
          c3 / 2 * y * lx, -c3 / 2 * (lam + x * lx), 0;
  d[1] << ly * cz, c1 * ly * sz, 0,
          -c2 * ly * sz, ly * cz, 0,
          c3 / 2 * (lam + y * ly), -c3 / 2 * x * ly, 0;
  d[2] << lam * dc, c1 * lam * cz, 0,
          -c2 * lam * cz, lam * dc, 0,
          0, 0, 0;
  return d;
}

Mat3 metric_at(const Model &m, const Vec3 &p) {
  Mat3 Bi = frame_at(m, p).Binv;
  return Bi.transpose() * m.eps.asDiagonal() * Bi;
}

double inner_E(const Model &m, const Vec3 &u, const Vec3 &v) {
  return m.eps(0) * u(0) * v(0) + m.eps(1) * u(1) * v(1) + m.eps(2) * u(2) * v(2);
}

Vec3 cross_E(const Model &m, const Vec3 &u, const Vec3 &v) { return m.eps.cwiseProduct(u.cross(v)); }

double inner(const Model &m, const Vec3 &u, const Vec3 &v, const Vec3 &p) {
  Mat3 Bi = frame_at(m, p).Binv;
  return inner_E(m, Bi * u, Bi * v);
}

Vec3 cross(const Model &m, const Vec3 &u, const Vec3 &v, const Vec3 &p) {
  Frame f = frame_at(m, p);
  return f.B * cross_E(m, f.Binv * u, f.Binv * v);
}

Vec3 connection(const Model &m, int i, int j) {
  const Vec3 &e = m.eps, &mu = m.mu;
  Vec3 r = Vec3::Zero();
  if (i == 0 && j == 1) r(2) = e(2) * mu(0);
  else if (i == 0 && j == 2) r(1) = -e(1) * mu(0);
  else if (i == 1 && j == 0) r(2) = -e(2) * mu(1);
  else if (i == 1 && j == 2) r(0) = e(0) * mu(1);
  else if (i == 2 && j == 0) r(1) = e(1) * mu(2);
  else if (i == 2 && j == 1) r(0) = -e(0) * mu(2);
  return r;
}

Mat3 connection_matrix(const Model &m, const Vec3 &X) {
  Mat3 G = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G.col(j) += X(i) * connection(m, i, j);
  return G;
}

Vec3 nabla_E(const Model &m, const Vec3 &X, const Vec3 &Y) { return connection_matrix(m, X) * Y; }

Vec3 curvature_R(const Model &m, const Vec3 &X, const Vec3 &Y, const Vec3 &Z) {
  const Vec3 &e = m.eps;
  double xz = inner_E(m, X, Z), yz = inner_E(m, Y, Z);
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    double zi = e(i) * Z(i), xi = e(i) * X(i), yi = e(i) * Y(i);
    Vec3 Ei = Vec3::Unit(i);
    Vec3 Ri = xz * Y - yz * X - e(i) * zi * xi * Y + e(i) * zi * yi * X - e(i) * yi * xz * Ei + e(i) * xi * yz * Ei;
    double coef = m.a(i) * e((i + 1) % 3) * e((i + 2) % 3);
    out += coef * Ri;
  }
  return out;
}

double sectional_curvature(const Model &m, const Vec3 &X, const Vec3 &Y) {
  double den = inner_E(m, X, X) * inner_E(m, Y, Y) - std::pow(inner_E(m, X, Y), 2);
  return inner_E(m, curvature_R(m, X, Y, Y), X) / den;
}

std::pair<cplx, cplx> cover_map(const Model &m, const Vec3 &p) {
  const double c1 = m.c(0), c2 = m.c(1), c3 = m.c(2);
  bool su = c1 > 0 && c2 > 0 && c3 > 0;
  bool sl = c1 > 0 && c2 > 0 && c3 < 0;
  if (!su && !sl) throw math_error("cover_map needs c1,c2,c3 > 0 or c1,c2 > 0 > c3");
  if (!in_domain(m, p)) throw math_error("point outside model domain (lambda <= 0)");
  const double x = p(0), y = p(1), z = p(2);
  double den = std::sqrt(1 + c3 / 4 * (c2 * x * x + c1 * y * y));
  cplx ph = std::exp(cplx(0, 0.5 * std::sqrt(c1 * c2) * z));
  double s = su ? 1.0 : -1.0;
  cplx b = 0.5 * cplx(std::sqrt(s * c1 * c3) * y, std::sqrt(s * c2 * c3) * x);
  return {ph / den, b * ph / den};
}

std::pair<cplx, cplx> cover_field(const Model &m, int i, const std::pair<cplx, cplx> &ab) {
  const double c1 = m.c(0), c2 = m.c(1), c3 = m.c(2);
  const cplx I(0, 1);
  auto [a, b] = ab;
  bool su = c3 > 0;
  double s = su ? 1.0 : -1.0;
  if (i == 0) {
    double k = 0.5 * std::sqrt(s * c2 * c3);
    return su ? std::pair{-I * k * std::conj(b), I * k * std::conj(a)}
              : std::pair{I * k * std::conj(b), I * k * std::conj(a)};
  }
  if (i == 1) {
    double k = 0.5 * std::sqrt(s * c1 * c3);
    return su ? std::pair{-k * std::conj(b), k * std::conj(a)} : std::pair{k * std::conj(b), k * std::conj(a)};
  }
  double k = 0.5 * std::sqrt(c1 * c2);
  return {I * k * a, I * k * b};
}

bool is_global(const Model &m) { return m.c(0) * m.c(2) <= 0 && m.c(1) * m.c(2) <= 0; }

} // namespace mlg
