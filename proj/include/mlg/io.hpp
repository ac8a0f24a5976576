#pragma once

#include "mlg/surface.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace mlg {

std::string fmt17(double x);

// Surface grid CSV: u,v,x,y,z; row-major in v then u.
void write_surface_csv(std::ostream &os, const GridSurface &s);
void write_surface_csv(const std::string &path, const GridSurface &s);
// Grid is inferred from the u,v columns; model is supplied separately.
GridSurface read_surface_csv(std::istream &is, const Model &m);
GridSurface read_surface_csv(const std::string &path, const Model &m);

// u,v,S11,S12,S22,T1_1,T1_2,T2_1,T2_2,T3_1,T3_2,nu1,nu2,nu3,H,K,P11,P12,P21,P22,eh1,eh2,eh3.
// S entries are <S e_k, e_l>; missing trailing columns are read as NaN / defaults.
void write_fundamental_csv(std::ostream &os, const FundamentalData &d);
void write_fundamental_csv(const std::string &path, const FundamentalData &d);
FundamentalData read_fundamental_csv(std::istream &is, const Model &m);
FundamentalData read_fundamental_csv(const std::string &path, const Model &m);

// {"c":[..],"eps":[..]} or {"family":..,"kappa":..,"tau":..}.
Model model_from_json(const nlohmann::json &j);
nlohmann::json model_to_json(const Model &m);

nlohmann::json read_json(const std::string &path);

} // namespace mlg
