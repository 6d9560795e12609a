#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "gqm/errors.hpp"
#include "gqm/surface_io.hpp"

using namespace gqm;

namespace {

SurfaceMap sample() { return perturb(rational_curve_sample(2, Grid({-1.0, 2.0}, {0.5, 1.5}, 5, 4), 2), 0.2, 3); }

std::string to_json(const SurfaceMap& m) {
  std::ostringstream out;
  write_surface_map_json(out, m);
  return out.str();
}

SurfaceMap from_json(const std::string& text) {
  std::istringstream in(text);
  return read_surface_map_json(in);
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(SurfaceMapJson, RoundTripIsExact) {
  const SurfaceMap m = sample();
  const SurfaceMap back = from_json(to_json(m));
  EXPECT_EQ(back.grid().n_s(), 5);
  EXPECT_EQ(back.grid().n_t(), 4);
  EXPECT_EQ(back.grid().s_range().lo, -1.0);
  EXPECT_EQ(back.grid().t_range().hi, 1.5);
  EXPECT_EQ(back.dim(), 3);
  EXPECT_EQ(back.boundary_fixed(), m.boundary_fixed());
  for (std::size_t k = 0; k < m.values().size(); ++k) {
    EXPECT_EQ(back.values()[k].vec(), m.values()[k].vec());
  }
  EXPECT_EQ(to_json(back), to_json(m));
}

TEST(SurfaceMapJson, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "gqm_surface_io_test.json";
  const SurfaceMap m = sample();
  save_surface_map(path.string(), m);
  const SurfaceMap back = load_surface_map(path.string());
  EXPECT_EQ(total_energy(back), total_energy(m));
  std::filesystem::remove(path);
  EXPECT_THROW(load_surface_map(path.string()), ArgumentError);
}

TEST(SurfaceMapJson, RejectsMalformedDocuments) {
  const std::string good = to_json(sample());
  EXPECT_THROW(from_json("{not json"), ArgumentError);
  EXPECT_THROW(from_json("{}"), ArgumentError);
  EXPECT_THROW(from_json(replace(good, "gqm.surface_map", "other")), ArgumentError);
  EXPECT_THROW(from_json(replace(good, "\"version\":1", "\"version\":2")), ArgumentError);
  EXPECT_THROW(from_json(replace(good, "\"n_s\":5", "\"n_s\":6")), DimensionError);
  EXPECT_THROW(from_json(replace(good, "\"dim\":3", "\"dim\":2")), DimensionError);
  EXPECT_THROW(from_json(replace(good, "\"n_t\":4", "\"n_t\":2")), ArgumentError);
}

TEST(SurfaceMapJson, RejectsNonUnitNodes) {
  const Grid g = Grid::square(1.0, 3);
  std::vector<StateVector> v(9, StateVector::basis(2, 0));
  const std::string good = to_json(SurfaceMap(g, v, std::vector<bool>(9, true)));
  EXPECT_THROW(from_json(replace(good, "[[1.0,0.0]", "[[1.5,0.0]")), NormalizationError);
}

TEST(EnergyTableCsv, HeaderAndRoundTripPrecision) {
  const EnergyBreakdown b{0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-17};
  std::ostringstream out;
  write_energy_table_csv(out, {{33, 33, b}, {65, 65, b}});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n_s,n_t,energy,area,symplectic,dbar");
  std::getline(in, line);
  std::istringstream row(line);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(row, cell, ',')) cells.push_back(cell);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0], "33");
  EXPECT_EQ(std::stod(cells[2]), 0.1);
  EXPECT_EQ(std::stod(cells[3]), 1.0 / 3.0);
  EXPECT_EQ(std::stod(cells[4]), 2.0 / 3.0);
  EXPECT_EQ(std::stod(cells[5]), 1e-17);
}
