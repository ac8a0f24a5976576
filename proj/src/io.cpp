#include "mlg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace mlg {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string &path) {
  std::ofstream os(path);
  if (!os) throw data_error("cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw parse_error("cannot open " + path);
  return is;
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

struct Table {
  std::map<std::string, int> col;
  std::vector<std::vector<double>> rows;

  bool has(const std::string &n) const { return col.count(n) > 0; }
  double get(std::size_t r, const std::string &n) const {
    auto it = col.find(n);
    return it == col.end() ? std::numeric_limits<double>::quiet_NaN() : rows[r][it->second];
  }
};

Table read_table(std::istream &is, const std::vector<std::string> &required) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw parse_error("empty CSV");
  auto head = split(line);
  for (std::size_t i = 0; i < head.size(); ++i) t.col[head[i]] = static_cast<int>(i);
  for (const auto &r : required)
    if (!t.has(r)) throw parse_error("CSV header lacks column " + r);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != head.size())
      throw parse_error("row " + std::to_string(lineno) + ": expected " + std::to_string(head.size()) + " fields");
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      try {
        std::size_t used = 0;
        row[i] = std::stod(cells[i], &used);
        if (used != cells[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::out_of_range &) {
        row[i] = std::numeric_limits<double>::quiet_NaN();
      } catch (const std::invalid_argument &) {
        std::string lc = cells[i];
        for (auto &ch : lc) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (lc == "nan" || lc == "-nan") row[i] = std::numeric_limits<double>::quiet_NaN();
        else throw parse_error("row " + std::to_string(lineno) + ": bad number '" + cells[i] + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw parse_error("CSV has no data rows");
  return t;
}

// Recovers the uniform grid from the u,v columns (u varies fastest).
Grid infer_grid(const Table &t) {
  std::size_t n = t.rows.size();
  for (std::size_t r = 0; r < n; ++r)
    if (!std::isfinite(t.get(r, "u")) || !std::isfinite(t.get(r, "v")))
      throw data_error("non-finite grid coordinate at data row " + std::to_string(r));
  double v0 = t.get(0, "v");
  std::size_t nu = 1;
  while (nu < n && t.get(nu, "v") == v0) ++nu;
  if (n % nu != 0) throw data_error("row count is not a multiple of the u-line length");
  std::size_t nv = n / nu;
  if (nu < 2 || nv < 2) throw data_error("grid needs at least 2 points per direction");
  double u0 = t.get(0, "u"), u1 = t.get(nu - 1, "u"), v1 = t.get(n - 1, "v");
  Grid g(u0, u1, static_cast<int>(nu), v0, v1, static_cast<int>(nv));
  double tu = 1e-9 * std::max(1.0, std::abs(g.du)) , tv = 1e-9 * std::max(1.0, std::abs(g.dv));
  for (std::size_t r = 0; r < n; ++r) {
    int i = static_cast<int>(r % nu), j = static_cast<int>(r / nu);
    if (std::abs(t.get(r, "u") - g.u(i)) > tu * 1e3 || std::abs(t.get(r, "v") - g.v(j)) > tv * 1e3)
      throw data_error("grid is not uniform/row-major at data row " + std::to_string(r));
  }
  return g;
}

} // namespace

void write_surface_csv(std::ostream &os, const GridSurface &s) {
  os << "u,v,x,y,z\n";
  for (int j = 0; j < s.grid.nv; ++j)
    for (int i = 0; i < s.grid.nu; ++i) {
      const Vec3 &p = s.pos[s.grid.idx(i, j)];
      os << fmt17(s.grid.u(i)) << ',' << fmt17(s.grid.v(j)) << ',' << fmt17(p(0)) << ',' << fmt17(p(1)) << ','
         << fmt17(p(2)) << '\n';
    }
}

void write_surface_csv(const std::string &path, const GridSurface &s) {
  auto os = open_out(path);
  write_surface_csv(os, s);
}

GridSurface read_surface_csv(std::istream &is, const Model &m) {
  Table t = read_table(is, {"u", "v", "x", "y", "z"});
  GridSurface s;
  s.model = m;
  s.grid = infer_grid(t);
  s.pos.resize(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    Vec3 p(t.get(r, "x"), t.get(r, "y"), t.get(r, "z"));
    if (!p.allFinite()) throw data_error("non-finite position at data row " + std::to_string(r));
    s.pos[r] = p;
  }
  return s;
}

GridSurface read_surface_csv(const std::string &path, const Model &m) {
  auto is = open_in(path);
  return read_surface_csv(is, m);
}

void write_fundamental_csv(std::ostream &os, const FundamentalData &d) {
  os << "u,v,S11,S12,S22,T1_1,T1_2,T2_1,T2_2,T3_1,T3_2,nu1,nu2,nu3,H,K,P11,P12,P21,P22,eh1,eh2,eh3\n";
  FrameAlgebra alg{d.ehat};
  for (int j = 0; j < d.grid.nv; ++j)
    for (int i = 0; i < d.grid.nu; ++i) {
      const PointData &p = d.at(i, j);
      Mat2 cov = alg.covariant(p.S);
      std::vector<double> vals{d.grid.u(i), d.grid.v(j), cov(0, 0), cov(0, 1), cov(1, 1)};
      for (int a = 0; a < 3; ++a) vals.push_back(p.T[a](0)), vals.push_back(p.T[a](1));
      for (int a = 0; a < 3; ++a) vals.push_back(p.nu(a));
      vals.push_back(p.H);
      vals.push_back(p.K);
      vals.insert(vals.end(), {p.P(0, 0), p.P(0, 1), p.P(1, 0), p.P(1, 1), d.ehat(0), d.ehat(1), d.ehat(2)});
      for (std::size_t k = 0; k < vals.size(); ++k) os << (k ? "," : "") << fmt17(vals[k]);
      os << '\n';
    }
}

void write_fundamental_csv(const std::string &path, const FundamentalData &d) {
  auto os = open_out(path);
  write_fundamental_csv(os, d);
}

FundamentalData read_fundamental_csv(std::istream &is, const Model &m) {
  Table t = read_table(is, {"u", "v"});
  FundamentalData d;
  d.model = m;
  d.grid = infer_grid(t);
  if (t.has("eh1")) {
    d.ehat = Vec3(t.get(0, "eh1"), t.get(0, "eh2"), t.get(0, "eh3"));
    for (int a = 0; a < 3; ++a)
      if (std::abs(std::abs(d.ehat(a)) - 1.0) > 1e-12) throw data_error("eh columns must be +-1");
  }
  FrameAlgebra alg{d.ehat};
  d.pts.resize(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    PointData &p = d.pts[r];
    Mat2 cov;
    cov << t.get(r, "S11"), t.get(r, "S12"), t.get(r, "S12"), t.get(r, "S22");
    p.S = alg.from_covariant(cov);
    for (int a = 0; a < 3; ++a) {
      std::string b = "T" + std::to_string(a + 1) + "_";
      p.T[a] = Vec2(t.get(r, b + "1"), t.get(r, b + "2"));
      p.nu(a) = t.get(r, "nu" + std::to_string(a + 1));
    }
    p.H = t.get(r, "H");
    p.K = t.get(r, "K");
    if (t.has("P11")) p.P << t.get(r, "P11"), t.get(r, "P12"), t.get(r, "P21"), t.get(r, "P22");
    else p.P = Mat2::Constant(std::numeric_limits<double>::quiet_NaN());
  }
  return d;
}

FundamentalData read_fundamental_csv(const std::string &path, const Model &m) {
  auto is = open_in(path);
  return read_fundamental_csv(is, m);
}

Model model_from_json(const nlohmann::json &j) {
  try {
    if (j.contains("family")) {
      Family f = family_from_string(j.at("family").get<std::string>());
      return make_dim4_model(f, j.at("kappa").get<double>(), j.at("tau").get<double>());
    }
    auto c = j.at("c").get<std::vector<double>>();
    auto e = j.contains("eps") ? j.at("eps").get<std::vector<double>>() : std::vector<double>{1, 1, 1};
    if (c.size() != 3 || e.size() != 3) throw parse_error("c and eps need three entries");
    return make_model(Vec3(c[0], c[1], c[2]), Vec3(e[0], e[1], e[2]));
  } catch (const nlohmann::json::exception &ex) {
    throw parse_error(std::string("model spec: ") + ex.what());
  }
}

nlohmann::json model_to_json(const Model &m) {
  nlohmann::json j;
  j["c"] = {m.c(0), m.c(1), m.c(2)};
  j["eps"] = {m.eps(0), m.eps(1), m.eps(2)};
  if (m.family != Family::None) {
    j["family"] = to_string(m.family);
    j["kappa"] = m.kappa;
    j["tau"] = m.tau;
  }
  return j;
}

nlohmann::json read_json(const std::string &path) {
  auto is = open_in(path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception &ex) {
    throw parse_error(path + ": " + ex.what());
  }
}

} // namespace mlg
