#pragma once

// Serialization of surface maps and energy tables.
//
// Surface map JSON layout (format "gqm.surface_map", version 1):
//
//   {
//     "format": "gqm.surface_map",
//     "version": 1,
//     "grid": {"s_range": [lo, hi], "t_range": [lo, hi], "n_s": N, "n_t": M},
//     "dim": D,
//     "values": [[[re, im], ... D pairs], ... N*M nodes],
//     "boundary_fixed": [true, false, ...]
//   }
//
// Nodes are row-major (rows of constant t, s varying fastest), matching
// Grid::index. Doubles are written in shortest round-trip form.
//
// Energy table CSV header: n_s,n_t,energy,area,symplectic,dbar

#include <iosfwd>
#include <string>
#include <vector>

#include "gqm/config.hpp"
#include "gqm/surface.hpp"

namespace gqm {

void write_surface_map_json(std::ostream& out, const SurfaceMap& map);

/// Throws ArgumentError on malformed documents, DimensionError on size
/// mismatches, NormalizationError when a node is not unit norm within tol_eq.
SurfaceMap read_surface_map_json(std::istream& in, const Config& cfg = {});

void save_surface_map(const std::string& path, const SurfaceMap& map);
SurfaceMap load_surface_map(const std::string& path, const Config& cfg = {});

struct EnergyTableRow {
  int n_s;
  int n_t;
  EnergyBreakdown breakdown;
};

void write_energy_table_csv(std::ostream& out, const std::vector<EnergyTableRow>& rows);

}  // namespace gqm
