#pragma once

#include "mlg/types.hpp"

#include <array>
#include <complex>
#include <string>
#include <utility>

namespace mlg {

enum class GroupType { SU2, SL2, E2, Sol3, Nil3, R3 };
enum class Family { None, EKT, LKT, LKT_HAT };

std::string to_string(GroupType g);
std::string to_string(Family f);
Family family_from_string(const std::string &s);

// Unimodular metric Lie group of diagonalizable type, in the cylinder model D x R.
// Vectors tagged "E" are components in the left-invariant frame {E1,E2,E3};
// vectors tagged "coord" are components in {dx,dy,dz}.
struct Model {
  Vec3 c = Vec3::Zero();
  Vec3 eps = Vec3::Ones();
  Vec3 mu = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  GroupType group = GroupType::R3;
  int iso_dim = 6;
  bool global = true;

  Family family = Family::None;
  double kappa = 0.0;
  double tau = 0.0;
  int dist = -1; // 0-based distinguished index when iso_dim >= 4 via a family

  // relabel[i] is the index in the published presentation that became index i here.
  std::array<int, 3> relabel{0, 1, 2};

  bool riemannian() const { return eps(2) > 0; }
  double eps123() const { return eps(0) * eps(1) * eps(2); }
};

Model make_model(const Vec3 &c, const Vec3 &eps);
Model make_dim4_model(Family family, double kappa, double tau);

// Relabel indices cyclically: new index i takes old index (i + shift) mod 3.
Model cyclic_relabel(const Model &m, int shift);

std::pair<double, double> cs_eval(const Model &m, double z);
double lambda_at(const Model &m, const Vec3 &p);
bool in_domain(const Model &m, const Vec3 &p);

struct Frame {
  Mat3 B;    // columns: E_i in coordinate components
  Mat3 Binv; // coordinate components -> E components
};

Frame frame_at(const Model &m, const Vec3 &p);
// Partial derivatives of B^{-1} with respect to x, y, z.
std::array<Mat3, 3> dBinv_at(const Model &m, const Vec3 &p);

Mat3 metric_at(const Model &m, const Vec3 &p);
double inner(const Model &m, const Vec3 &u, const Vec3 &v, const Vec3 &p); // coordinate vectors
Vec3 cross(const Model &m, const Vec3 &u, const Vec3 &v, const Vec3 &p);   // coordinate vectors

double inner_E(const Model &m, const Vec3 &u, const Vec3 &v);
Vec3 cross_E(const Model &m, const Vec3 &u, const Vec3 &v);

// nabla_{E_i} E_j in E components (0-based indices).
Vec3 connection(const Model &m, int i, int j);
// nabla_X Y for left-invariant X, Y.
Vec3 nabla_E(const Model &m, const Vec3 &X, const Vec3 &Y);
// Matrix G(X) with nabla_X E_j = sum_i G(X)(i,j) E_i.
Mat3 connection_matrix(const Model &m, const Vec3 &X);

// Curvature tensor on E-frame vectors (left-invariant, so p is not needed).
Vec3 curvature_R(const Model &m, const Vec3 &X, const Vec3 &Y, const Vec3 &Z);
double sectional_curvature(const Model &m, const Vec3 &X, const Vec3 &Y);

using cplx = std::complex<double>;
std::pair<cplx, cplx> cover_map(const Model &m, const Vec3 &p);
// Left-invariant field X_i on the quadric evaluated at (a, b).
std::pair<cplx, cplx> cover_field(const Model &m, int i, const std::pair<cplx, cplx> &ab);

bool is_global(const Model &m);

} // namespace mlg
