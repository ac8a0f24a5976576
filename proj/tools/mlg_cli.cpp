#include "mlg/correspondences.hpp"
#include "mlg/io.hpp"
#include "mlg/reconstruction.hpp"
#include "mlg/special.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

using namespace mlg;
namespace fs = std::filesystem;

namespace {

struct Opts {
  std::string c, eps, family, in, out, mode, q0;
  std::optional<double> kappa, tau, tol, theta, h_sign;
  double h = 0.05, radius = 1.0;
  bool json = false;
};

Vec3 parse_triple(const std::string &s, const char *what) {
  std::stringstream ss(s);
  std::string cell;
  std::vector<double> v;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception &) {
      throw parse_error(std::string("bad number in ") + what + ": '" + cell + "'");
    }
  }
  if (v.size() != 3) throw parse_error(std::string(what) + " needs three comma-separated values");
  return Vec3(v[0], v[1], v[2]);
}

std::string triple(const Vec3 &v) { return fmt17(v(0)) + "," + fmt17(v(1)) + "," + fmt17(v(2)); }

// Flags take precedence over a "model" object in the manifest.
Model model_of(const Opts &o, const nlohmann::json *manifest = nullptr) {
  if (!o.family.empty()) {
    if (!o.kappa || !o.tau) throw parse_error("--family needs --kappa and --tau");
    return make_dim4_model(family_from_string(o.family), *o.kappa, *o.tau);
  }
  if (!o.c.empty()) {
    Vec3 e = o.eps.empty() ? Vec3::Ones() : parse_triple(o.eps, "--eps");
    return make_model(parse_triple(o.c, "--c"), e);
  }
  if (manifest && manifest->contains("model")) return model_from_json(manifest->at("model"));
  throw parse_error("no model given (use --c/--eps or --family/--kappa/--tau)");
}

bool is_json(const std::string &p) { return fs::path(p).extension() == ".json"; }

struct Input {
  nlohmann::json manifest = nlohmann::json::object();
  std::string data_path;
};

Input resolve_input(const Opts &o) {
  if (o.in.empty()) throw parse_error("--in is required");
  Input r;
  if (is_json(o.in)) {
    r.manifest = read_json(o.in);
    if (!r.manifest.contains("input")) throw parse_error("manifest lacks \"input\"");
    fs::path p = r.manifest.at("input").get<std::string>();
    if (p.is_relative()) p = fs::path(o.in).parent_path() / p;
    r.data_path = p.string();
  } else {
    r.data_path = o.in;
  }
  if (!fs::exists(r.data_path)) throw parse_error("input file not found: " + r.data_path);
  return r;
}

bool has_positions(const std::string &path) {
  std::ifstream is(path);
  std::string head;
  std::getline(is, head);
  return head.find(",x,") != std::string::npos || head.rfind("x,", 0) == 0;
}

// Fundamental data from either a surface grid or a fundamental-data CSV.
FundamentalData load_data(const std::string &path, const Model &m, std::optional<Vec3> *first_pos = nullptr) {
  if (has_positions(path)) {
    GridSurface s = read_surface_csv(path, m);
    if (first_pos) *first_pos = s.pos[0];
    FundamentalData d = extract_fundamental_data(s);
    fill_intrinsic_curvature(d);
    return d;
  }
  FundamentalData d = read_fundamental_csv(path, m);
  if (!d.pts[0].P.allFinite()) throw data_error("fundamental-data CSV lacks the P columns needed here");
  return d;
}

void print_report(const ResidualReport &r) {
  for (const auto &e : r.entries) std::cout << e.name << " max=" << fmt17(e.max) << " rms=" << fmt17(e.rms) << "\n";
}

std::string sibling(const std::string &out, const std::string &tag) {
  fs::path p(out);
  return (p.parent_path() / (p.stem().string() + tag + p.extension().string())).string();
}

Grid centered_grid(double h, int half = 10) { return Grid(-half * h, half * h, 2 * half + 1, -half * h, half * h, 2 * half + 1); }

int cmd_classify(const Opts &o) {
  Model m = model_of(o);
  if (o.json) {
    nlohmann::json j = model_to_json(m);
    j["group"] = to_string(m.group);
    j["iso_dim"] = m.iso_dim;
    j["global"] = m.global;
    j["mu"] = {m.mu(0), m.mu(1), m.mu(2)};
    j["a"] = {m.a(0), m.a(1), m.a(2)};
    j["family_detected"] = to_string(m.family);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << to_string(m.group) << " iso_dim=" << m.iso_dim << " global=" << (m.global ? "true" : "false") << "\n";
  std::cout << "mu=" << triple(m.mu) << "\n";
  std::cout << "a=" << triple(m.a) << "\n";
  std::cout << "family=" << to_string(m.family);
  if (m.family != Family::None) std::cout << " kappa=" << fmt17(m.kappa) << " tau=" << fmt17(m.tau);
  std::cout << "\n";
  return 0;
}

int cmd_analyze(const Opts &o) {
  if (o.in.empty()) throw parse_error("--in is required");
  Model m = model_of(o);
  GridSurface s = read_surface_csv(o.in, m);
  FundamentalData d = extract_fundamental_data(s);
  fill_intrinsic_curvature(d);
  ResidualReport r = compatibility_residuals(d);
  print_report(r);
  auto df = derived_fields(d);
  double zmin = INFINITY, zmax = -INFINITY, pmin = INFINITY, pmax = -INFINITY, hmax = 0.0;
  for (std::size_t k = 0; k < df.size(); ++k) {
    zmin = std::min(zmin, df[k].zeta), zmax = std::max(zmax, df[k].zeta);
    pmin = std::min(pmin, df[k].psi_formula), pmax = std::max(pmax, df[k].psi_formula);
    hmax = std::max(hmax, std::abs(d.pts[k].H));
  }
  std::cout << "ehat=" << triple(d.ehat) << "\n";
  std::cout << "zeta range=[" << fmt17(zmin) << "," << fmt17(zmax) << "]\n";
  std::cout << "psi range=[" << fmt17(pmin) << "," << fmt17(pmax) << "]\n";
  if (hmax > 1e-8) {
    auto cr = companion_residual(d);
    double cm = 0.0;
    for (int j = 2; j < d.grid.nv - 2; ++j)
      for (int i = 2; i < d.grid.nu - 2; ++i)
        if (std::isfinite(cr[d.grid.idx(i, j)])) cm = std::max(cm, cr[d.grid.idx(i, j)]);
    std::cout << "companion max=" << fmt17(cm) << "\n";
  }
  if (!o.out.empty()) write_fundamental_csv(o.out, d);
  ReconstructionOptions ro;
  if (o.tol) ro.tol = *o.tol;
  double tol = acceptance_tol(d.grid, ro);
  double worst = max_residual(r);
  if (worst > tol) {
    std::cerr << "compatibility residual " << fmt17(worst) << " exceeds tolerance " << fmt17(tol) << "\n";
    return static_cast<int>(ErrorKind::Precondition);
  }
  return 0;
}

int cmd_reconstruct(const Opts &o) {
  Input in = resolve_input(o);
  const auto &mf = in.manifest;
  Model m = model_of(o, &mf);
  std::optional<Vec3> first;
  FundamentalData d = load_data(in.data_path, m, &first);
  std::string mode = !o.mode.empty() ? o.mode : mf.value("mode", std::string("from_T"));
  ReconstructionOptions ro;
  if (!o.q0.empty()) ro.q0 = parse_triple(o.q0, "--q0");
  else if (mf.contains("q0")) {
    auto q = mf.at("q0").get<std::vector<double>>();
    if (q.size() != 3) throw parse_error("q0 needs three entries");
    ro.q0 = Vec3(q[0], q[1], q[2]);
  } else if (first) ro.q0 = *first;
  if (o.tol) ro.tol = *o.tol;
  else if (mf.contains("tolerances") && mf.at("tolerances").contains("acceptance"))
    ro.tol = mf.at("tolerances").at("acceptance").get<double>();
  double hs = o.h_sign ? *o.h_sign : mf.value("H_sign", 1.0);
  if (hs != 1.0 && hs != -1.0) throw parse_error("H sign must be +1 or -1");

  Reconstruction r;
  if (mode == "from_T") r = reconstruct_from_T(d, ro);
  else if (mode == "from_angles") r = reconstruct_from_angles(d, hs, ro);
  else if (mode == "dim4") r = reconstruct_dim4(d, dim4_params(m), ro);
  else throw parse_error("unknown mode '" + mode + "' (from_T, from_angles, dim4)");

  print_report(r.diagnostics);
  if (std::isfinite(r.darboux)) std::cout << "darboux max=" << fmt17(r.darboux) << "\n";
  std::cout << "path_gap=" << fmt17(r.path_gap) << "\n";
  if (!o.out.empty()) write_surface_csv(o.out, r.surface);
  return 0;
}

int cmd_correspond(const Opts &o) {
  Input in = resolve_input(o);
  const auto &mf = in.manifest;
  Model m = model_of(o, &mf);
  FundamentalData d = load_data(in.data_path, m);
  std::string mode = !o.mode.empty() ? o.mode : mf.value("mode", std::string("daniel"));
  Correspondence c;
  if (mode == "daniel") {
    double theta = o.theta ? *o.theta : mf.value("theta", std::numeric_limits<double>::quiet_NaN());
    if (!std::isfinite(theta)) throw parse_error("daniel needs --theta or \"theta\" in the manifest");
    std::string tf = mf.value("target_family", std::string("auto"));
    if (tf != "auto" && tf != to_string(m.family)) throw parse_error("target_family must be \"auto\" or the source family");
    c = daniel_transform(d, theta);
  } else if (mode == "twin") {
    c = twin_s3(d);
  } else {
    throw parse_error("unknown mode '" + mode + "' (daniel, twin)");
  }
  const auto &p = c.params;
  nlohmann::json j;
  j["theta"] = p.theta;
  j["hyperbolic"] = p.hyperbolic;
  j["H"] = p.H;
  j["H_target"] = p.H_target;
  j["source"] = {{"family", to_string(p.source.family)}, {"kappa", p.source.kappa}, {"tau", p.source.tau}};
  j["target"] = {{"family", to_string(p.target.family)}, {"kappa", p.target.kappa}, {"tau", p.target.tau}};
  std::cout << j.dump(2) << "\n";

  ReconstructionOptions ro;
  if (o.tol) ro.tol = *o.tol;
  if (mode == "twin") {
    Reconstruction r = reconstruct_from_T(c.data, ro);
    std::cout << "path_gap=" << fmt17(r.path_gap) << "\n";
    if (!o.out.empty()) write_surface_csv(o.out, r.surface);
    return 0;
  }
  print_report(dim4_residuals(c.data, p.target));
  if (p.target.tau == 0.0) {
    std::cout << "target has tau = 0 (product space, no Lie group model); writing fundamental data\n";
    if (!o.out.empty()) write_fundamental_csv(o.out, c.data);
    return 0;
  }
  Reconstruction r = reconstruct_dim4(c.data, p.target, ro);
  std::cout << "darboux max=" << fmt17(r.darboux) << "\npath_gap=" << fmt17(r.path_gap) << "\n";
  if (!o.out.empty()) write_surface_csv(o.out, r.surface);
  return 0;
}

void write_patch(const SurfacePatch &p, const Grid &g, const std::string &out) {
  if (!out.empty()) write_surface_csv(out, sample(p, g));
}

int cmd_special(const Opts &o) {
  Model m = model_of(o);
  Grid g = centered_grid(o.h);
  if (o.mode == "constant-angle") {
    double eh3 = o.h_sign ? *o.h_sign : 1.0;
    ConstantAngleSet s = constant_angle_set(m, eh3);
    static const char *kinds[] = {"empty", "points", "curves", "sphere"};
    std::cout << "kind=" << kinds[static_cast<int>(s.kind)] << "\n";
    if (s.kind == ConstantAngleSet::Kind::Points || s.kind == ConstantAngleSet::Kind::Curves)
      std::cout << "w0=" << triple(s.w0) << "\nw1=" << triple(s.w1) << "\nbounded=" << (s.bounded ? "true" : "false")
                << "\n";
    auto pts = s.sample(8);
    for (const auto &p : pts) std::cout << "nu=" << triple(p) << "\n";
    if (!o.out.empty() && !pts.empty()) {
      IntegralSurface is = integral_surface(m, pts.front(), Vec3::Zero(), g);
      std::cout << "commutativity_defect=" << fmt17(is.commutativity_defect) << "\n";
      write_patch(is.patch, g, o.out);
    }
    return 0;
  }
  if (o.mode == "totally-geodesic") {
    TotallyGeodesicResult t = totally_geodesic(m);
    if (t.constant_curvature) std::cout << "constant-curvature: every plane is totally geodesic\n";
    else if (t.distributions.empty()) std::cout << "none\n";
    for (const auto &dd : t.distributions)
      std::cout << "k=" << dd.k + 1 << " nu=" << triple(dd.nu) << " Y1=" << triple(dd.Y1) << " Y2=" << triple(dd.Y2) << "\n";
    if (!o.out.empty() && !t.distributions.empty()) {
      IntegralSurface is = integral_surface(m, t.distributions.front().nu, Vec3::Zero(), g);
      std::cout << "commutativity_defect=" << fmt17(is.commutativity_defect) << "\n";
      write_patch(is.patch, g, o.out);
    }
    return 0;
  }
  if (o.mode == "cylinder") {
    VerticalCylinder vc = vertical_cylinder(m, o.radius);
    std::cout << "H=" << fmt17(vc.H) << "\nconformal=" << fmt17(vc.conformal) << "\n";
    Grid cg(0.0, 20 * o.h, 21, 0.0, 20 * o.h, 21);
    if (!o.out.empty()) {
      write_patch(vc.surface, cg, o.out);
      write_patch(vc.companion, cg, sibling(o.out, "_companion"));
    }
    return 0;
  }
  throw parse_error("unknown special mode '" + o.mode + "' (constant-angle, totally-geodesic, cylinder)");
}

void model_flags(CLI::App *s, Opts &o) {
  s->add_option("--c", o.c, "structure constants c1,c2,c3");
  s->add_option("--eps", o.eps, "signs e1,e2,e3");
  s->add_option("--family", o.family, "EKT, LKT or LKT_HAT");
  s->add_option("--kappa", o.kappa, "base curvature");
  s->add_option("--tau", o.tau, "bundle curvature");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Surfaces in three-dimensional metric Lie groups"};
  app.require_subcommand(1);
  Opts o;

  auto *classify = app.add_subcommand("classify", "classify a metric Lie group model");
  model_flags(classify, o);
  classify->add_flag("--json", o.json, "JSON output");

  auto *analyze = app.add_subcommand("analyze", "residuals of a surface grid CSV");
  model_flags(analyze, o);
  analyze->add_option("--in", o.in, "surface CSV")->required();
  analyze->add_option("--out", o.out, "fundamental-data CSV");
  analyze->add_option("--tol", o.tol, "acceptance tolerance (default 100 h^2)");

  auto *recon = app.add_subcommand("reconstruct", "rebuild a surface from fundamental data");
  model_flags(recon, o);
  recon->add_option("--in", o.in, "manifest JSON, fundamental-data CSV or surface CSV")->required();
  recon->add_option("--out", o.out, "surface CSV");
  recon->add_option("--mode", o.mode, "from_T, from_angles or dim4");
  recon->add_option("--h-sign", o.h_sign, "branch of H for from_angles (+1 or -1)");
  recon->add_option("--tol", o.tol, "acceptance tolerance (default 100 h^2)");
  recon->add_option("--q0", o.q0, "base point x,y,z");

  auto *corr = app.add_subcommand("correspond", "Daniel-type correspondence or twin immersion");
  model_flags(corr, o);
  corr->add_option("--in", o.in, "manifest JSON, fundamental-data CSV or surface CSV")->required();
  corr->add_option("--out", o.out, "surface CSV (fundamental data when the target has tau = 0)");
  corr->add_option("--mode", o.mode, "daniel or twin");
  corr->add_option("--theta", o.theta, "phase angle");
  corr->add_option("--tol", o.tol, "acceptance tolerance (default 100 h^2)");

  auto *special = app.add_subcommand("special", "explicit surface families");
  special->set_help_flag("--help", "print help");
  model_flags(special, o);
  special->add_option("--mode", o.mode, "constant-angle, totally-geodesic or cylinder")->required();
  special->add_option("--h", o.h, "grid spacing of the emitted patch");
  special->add_option("--h-sign", o.h_sign, "ehat3 for constant-angle");
  special->add_option("--radius", o.radius, "cylinder radius");
  special->add_option("--out", o.out, "surface CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::Parse);
  }

  try {
    if (*classify) return cmd_classify(o);
    if (*analyze) return cmd_analyze(o);
    if (*recon) return cmd_reconstruct(o);
    if (*corr) return cmd_correspond(o);
    if (*special) return cmd_special(o);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Parse);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Data);
  }
  return 0;
}
