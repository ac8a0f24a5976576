#pragma once

#include "mlg/grid.hpp"
#include "mlg/model.hpp"

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace mlg {

// Position and partial derivatives in coordinate components.
struct Jet {
  Vec3 p, pu, pv, puu, puv, pvv;
};

struct SurfacePatch {
  Model model;
  std::function<Vec3(double, double)> position;
  std::function<Jet(double, double)> jet; // optional analytic partials
  double h = 5e-3;                        // finite-difference step when jet is empty

  Jet eval(double u, double v) const;
};

// Positions sampled on a grid; derivatives come from 4th-order grid stencils.
struct GridSurface {
  Model model;
  Grid grid;
  std::vector<Vec3> pos;
};

GridSurface sample(const SurfacePatch &patch, const Grid &g);
std::vector<Jet> grid_jets(const GridSurface &s);

struct PointData {
  Vec3 pos = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  Mat2 P = Mat2::Identity(); // row k: e_k in (d/du, d/dv) components
  Mat2 S = Mat2::Zero();     // column k: S e_k in frame components
  std::array<Vec2, 3> T{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()}; // frame components
  Vec3 nu = Vec3::Zero();
  double H = 0.0;
  double K = std::numeric_limits<double>::quiet_NaN();
  Mat3 M = Mat3::Identity(); // columns e1, e2, N in E components
};

struct FundamentalData {
  Model model;
  Grid grid;
  Vec3 ehat = Vec3::Ones(); // (<e1,e1>, <e2,e2>, <N,N>)
  bool has_frame = false;   // M and pos hold extracted values
  std::vector<PointData> pts;

  PointData &at(int i, int j) { return pts[grid.idx(i, j)]; }
  const PointData &at(int i, int j) const { return pts[grid.idx(i, j)]; }
  bool timelike() const { return ehat(0) * ehat(1) < 0; }
};

struct AdaptedFrame {
  Vec3 e1, e2, N; // E components
  Vec3 ehat;
  Mat2 P;
};

Mat2 first_fundamental_form(const SurfacePatch &patch, double u, double v);
AdaptedFrame adapted_frame(const Model &m, const Jet &j);
AdaptedFrame adapted_frame(const SurfacePatch &patch, double u, double v);
PointData extract_point(const Model &m, const Jet &j);

FundamentalData extract_fundamental_data(const SurfacePatch &patch, const Grid &g);
FundamentalData extract_fundamental_data(const GridSurface &s);
// Fills K on the grid from the induced metric (Brioschi formula, grid differences).
void fill_intrinsic_curvature(FundamentalData &d, int order = 2);

// Frame-level algebra on the adapted frame with signs ehat.
struct FrameAlgebra {
  Vec3 ehat;
  double dot(const Vec2 &x, const Vec2 &y) const { return ehat(0) * x(0) * y(0) + ehat(1) * x(1) * y(1); }
  Mat2 J() const {
    Mat2 j;
    j << 0, -ehat(0), ehat(1), 0;
    return j;
  }
  // <S e_k, e_l>
  Mat2 covariant(const Mat2 &op) const;
  Mat2 from_covariant(const Mat2 &cov) const;
  double det(const Mat2 &op) const { return op.determinant(); }
};

// Intrinsic differential calculus on the data grid.
class SurfaceCalculus {
public:
  SurfaceCalculus(const FundamentalData &d, int order = 2);

  std::vector<Vec2> frame_d(const std::vector<double> &f) const; // (e1 f, e2 f)
  std::vector<Vec2> gradient(const std::vector<double> &f) const;
  // Column k of the result is nabla_{e_k} Y.
  std::vector<Mat2> covariant(const std::vector<Vec2> &y) const;
  // omega^1_2(e_1), omega^1_2(e_2).
  const Vec2 &om12(std::size_t k) const { return om12_[k]; }
  // [e1,e2] in frame components.
  const Vec2 &bracket(std::size_t k) const { return br_[k]; }
  const FrameAlgebra &alg() const { return alg_; }
  int order() const { return order_; }

private:
  const FundamentalData &d_;
  int order_;
  FrameAlgebra alg_;
  std::vector<Vec2> om12_, br_;
};

struct ResidualEntry {
  std::string name;
  double max = 0.0;
  double rms = 0.0;
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;
  double max_of(const std::string &prefix) const;
  const ResidualEntry *find(const std::string &name) const;
  void add(const std::string &name, const std::vector<double> &vals, const Grid &g, int band);
};

// Items (i)-(v): gauss, codazzi, algebraic, nablaT1..3, nablanu1..3.
ResidualReport compatibility_residuals(const FundamentalData &d, int band = 2, int order = 2);

struct DerivedFields {
  double zeta = 0.0;
  double psi = 0.0;         // from <X_g,X_g>/(eps_g - ehat3 nu_g^2), largest denominator
  double psi_formula = 0.0; // 4H^2 ehat1 ehat2 + zeta^2
  std::array<Vec2, 3> X{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  Vec2 T = Vec2::Zero(); // sum a_i nu_i T_i
};

std::vector<DerivedFields> derived_fields(const FundamentalData &d, int order = 2);
// X fields and psi from angles only (no T, S needed).
std::vector<DerivedFields> derived_from_angles(const FundamentalData &d, int order = 2);

// Lemma items (a), (b), (c) as residuals of the angle-only identities.
ResidualReport lemma_xi_residuals(const FundamentalData &d, int band = 2, int order = 2);

struct ShapeCandidate {
  Mat2 S;
  double defect; // sum (eps_a <grad nu_a, J T_a> + eps123 c_a nu_a^2)
  double asym;   // |<Se1,e2> - <Se2,e1>|
};
std::vector<ShapeCandidate> shape_from_T_nu(const FundamentalData &d, int order = 2);

ResidualReport divergence_identities(const FundamentalData &d, int band = 2, int order = 2);

// Residual of zeta grad log|H| - grad zeta - sum eps mu nu J X; NaN where |H| < hmin.
std::vector<double> companion_residual(const FundamentalData &d, int order = 2, double hmin = 1e-8);

// Parameters for the reduced equations of spaces with 4-dimensional isometry group.
struct Dim4Params {
  Family family = Family::None;
  double kappa = 0.0, tau = 0.0;
  int dist = 2;
};
Dim4Params dim4_params(const Model &m);
// Coefficients: K = ehat3 det S + g0 + g1 nu_d^2.
double dim4_g0(const Dim4Params &p);
double dim4_g1(const Dim4Params &p, double ehat3);
double dim4_eps_d(const Dim4Params &p);

// Conditions (i*)-(v*) with the distinguished index taken from the params.
ResidualReport dim4_residuals(const FundamentalData &d, const Dim4Params &p, int band = 2, int order = 2);

// Largest max over all entries.
double max_residual(const ResidualReport &r);

} // namespace mlg
