#include "gqm/surface_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "gqm/errors.hpp"

namespace gqm {

using nlohmann::json;

void write_surface_map_json(std::ostream& out, const SurfaceMap& map) {
  const Grid& g = map.grid();
  json values = json::array();
  for (const StateVector& v : map.values()) {
    json node = json::array();
    for (Index a = 0; a < v.dim(); ++a) node.push_back({v[a].real(), v[a].imag()});
    values.push_back(std::move(node));
  }
  json mask = json::array();
  for (bool f : map.boundary_fixed()) mask.push_back(f);

  json doc = {
      {"format", "gqm.surface_map"},
      {"version", 1},
      {"grid",
       {{"s_range", {g.s_range().lo, g.s_range().hi}},
        {"t_range", {g.t_range().lo, g.t_range().hi}},
        {"n_s", g.n_s()},
        {"n_t", g.n_t()}}},
      {"dim", map.dim()},
      {"values", std::move(values)},
      {"boundary_fixed", std::move(mask)},
  };
  out << doc.dump() << '\n';
}

SurfaceMap read_surface_map_json(std::istream& in, const Config& cfg) {
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("surface map: invalid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "gqm.surface_map") {
      throw ArgumentError("surface map: unexpected format tag");
    }
    if (doc.at("version").get<int>() != 1) throw ArgumentError("surface map: unsupported version");
    const json& jg = doc.at("grid");
    const auto s = jg.at("s_range").get<std::vector<double>>();
    const auto t = jg.at("t_range").get<std::vector<double>>();
    if (s.size() != 2 || t.size() != 2) throw ArgumentError("surface map: ranges need two ends");
    Grid grid({s[0], s[1]}, {t[0], t[1]}, jg.at("n_s").get<int>(), jg.at("n_t").get<int>());
    const auto dim = doc.at("dim").get<Index>();

    const json& jv = doc.at("values");
    const json& jm = doc.at("boundary_fixed");
    if (jv.size() != grid.node_count() || jm.size() != grid.node_count()) {
      throw DimensionError("surface map: node count does not match the grid");
    }
    std::vector<StateVector> values;
    values.reserve(jv.size());
    for (const json& node : jv) {
      if (static_cast<Index>(node.size()) != dim) {
        throw DimensionError("surface map: node has the wrong number of components");
      }
      CVector v(dim);
      for (Index a = 0; a < dim; ++a) {
        const json& pair = node.at(static_cast<std::size_t>(a));
        if (pair.size() != 2) throw ArgumentError("surface map: components are [re, im] pairs");
        v[a] = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
      }
      values.emplace_back(std::move(v), cfg.tol_eq);
    }
    std::vector<bool> mask;
    mask.reserve(jm.size());
    for (const json& f : jm) mask.push_back(f.get<bool>());
    return SurfaceMap(std::move(grid), std::move(values), std::move(mask));
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("surface map: ") + e.what());
  }
}

void save_surface_map(const std::string& path, const SurfaceMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open " + path + " for writing");
  write_surface_map_json(out, map);
}

SurfaceMap load_surface_map(const std::string& path, const Config& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path);
  return read_surface_map_json(in, cfg);
}

void write_energy_table_csv(std::ostream& out, const std::vector<EnergyTableRow>& rows) {
  out << "n_s,n_t,energy,area,symplectic,dbar\n";
  for (const EnergyTableRow& r : rows) {
    out << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.n_s, r.n_t, r.breakdown.energy,
                       r.breakdown.area, r.breakdown.symplectic, r.breakdown.dbar);
  }
}

}  // namespace gqm
