#pragma once

#include "mlg/surface.hpp"

#include <optional>

namespace mlg {

// Change-of-frame matrices: column k holds e1, e2, N in E components.
struct FrameField {
  Grid grid;
  std::vector<Mat3> M;
};

// Theta = Omega + L(M) on the frame vectors and on the coordinate vectors.
struct ThetaField {
  Grid grid;
  std::vector<Mat3> on_e1, on_e2;
  std::vector<Mat3> on_u, on_v;
};

struct IntegrabilityReport {
  std::vector<double> darboux; // |d_u Theta(v) - d_v Theta(u) + [Theta(u), Theta(v)]|
  double darboux_max = 0.0;
  double path_gap = 0.0;
};

enum class Sweep { RowFirst, ColumnFirst };

// Completes the first two columns to SO_3^eps; fills nu on the data.
FrameField build_M_from_T(FundamentalData &d, double tol = 1e-8);

// L(M)(X) for X with frame components x.
Mat3 L_matrix(const Model &m, const Mat3 &M, const Vec2 &x);
// Omega(e_k) from S and omega^1_2(e_k).
Mat3 omega_matrix(const Mat2 &S, double om12, const Vec3 &ehat, int k);

ThetaField theta_field(const FundamentalData &d, const FrameField &M, int order = 4, double sym_tol = 1e-6);
// Theta built from the distinguished row only (the remaining rows are an arbitrary completion).
ThetaField theta_field_dim4(const FundamentalData &d, int dist, int order = 4, double sym_tol = 1e-6);
// Any SO_3^eps matrix whose row `dist` is `row`.
Mat3 complete_row(const Model &m, const Vec3 &ehat, int dist, const Vec3 &row);

IntegrabilityReport darboux_residual(const ThetaField &t, int band = 2, int order = 2);
// max |dM - M Theta| per column over interior points (coordinate directions u and v).
std::array<double, 3> frame_equation_residual(const FrameField &f, const ThetaField &t, int band = 2, int order = 2);

// eps-Gram-Schmidt onto column signs ehat.
Mat3 reorthonormalize(const Model &m, const Vec3 &ehat, const Mat3 &M);
// Exponential of a matrix in so_3^eps.
Mat3 expm_so3eps(const Mat3 &A);

// Base point is grid index (0,0).
FrameField integrate_frame(const Model &m, const Vec3 &ehat, const ThetaField &t, const Mat3 &M0,
                           Sweep sweep = Sweep::RowFirst);
std::vector<Vec3> integrate_position(const Model &m, const FrameField &f, const std::vector<Mat2> &P, const Vec3 &q0,
                                     Sweep sweep = Sweep::RowFirst);

struct ReconstructionOptions {
  Vec3 q0 = Vec3::Zero();
  double tol = -1.0; // condition acceptance; negative means 100 h^2
  int order = 4;     // finite-difference order for derived quantities
  bool check = true;
};

struct Reconstruction {
  GridSurface surface;
  FrameField frame;
  FundamentalData data; // data actually used (T, nu, S filled)
  ResidualReport diagnostics;
  double path_gap = 0.0;
  double darboux = std::numeric_limits<double>::quiet_NaN();
};

double acceptance_tol(const Grid &g, const ReconstructionOptions &o);

// Input: T, P on the grid (and ehat). S, nu are recomputed.
Reconstruction reconstruct_from_T(const FundamentalData &in, const ReconstructionOptions &o = {});

// Input: nu, P. H is sign * sqrt(ehat1 ehat2 (psi - zeta^2)) / 2, or the given grid.
Reconstruction reconstruct_from_angles(const FundamentalData &in, double h_sign, const ReconstructionOptions &o = {},
                                       const std::vector<double> *H = nullptr);
// T from angles and a chosen H per point.
void tangents_from_angles(FundamentalData &d, double h_sign, const std::vector<double> *H, int order);

// Input: S, T[dist], nu[dist], P, K of a surface in a space with 4-dimensional isometry group.
Reconstruction reconstruct_dim4(const FundamentalData &in, const Dim4Params &p, const ReconstructionOptions &o = {},
                                std::optional<Mat3> M0 = std::nullopt);

} // namespace mlg
