#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gseq/field_io.hpp"

using namespace gseq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gseq_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(FieldIo, RoundTripIsBitExact) {
  const GridGeometry g(2, 1, 5, 3, 3.0, 0.75);
  const SpaceTimeField u = SpaceTimeField::from_function(
      g, [](double t, const Eigen::VectorXd& x) { return std::sin(x(0) + 1.0 / 3.0) * t + x(1) / 7.0; });
  const std::string stem = scratch("field").string();
  write_field(stem, u);
  EXPECT_EQ(fs::file_size(stem + ".bin"), static_cast<std::uintmax_t>(g.size() * 8));
  const SpaceTimeField v = read_field(stem);
  EXPECT_EQ(v.geometry(), g);
  EXPECT_EQ((u.values() - v.values()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FieldIo, TruncatedDataIsRejected) {
  const GridGeometry g(2, 1, 4, 3);
  const std::string stem = scratch("short").string();
  write_field(stem, SpaceTimeField::constant(g, 1.0));
  fs::resize_file(stem + ".bin", 16);
  EXPECT_THROW(read_field(stem), std::runtime_error);
  EXPECT_THROW(read_field(scratch("missing").string()), std::runtime_error);
}

TEST(FieldIo, GeometryHeader) {
  const GridGeometry g(4, 2, 6, 5);
  const GridGeometry h = geometry_from_json(geometry_json(g));
  EXPECT_EQ(g, h);
  EXPECT_NE(geometry_json(g).find("float64-le"), std::string::npos);
}

TEST(FieldIo, CsvSlice) {
  const GridGeometry g(2, 1, 4, 3);
  const SpaceTimeField u = SpaceTimeField::from_function(g, [](double t, const Eigen::VectorXd&) { return t; });
  const std::string path = scratch("slice.csv").string();
  write_csv_slice(path, u, 2);
  std::ifstream in(path);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "x1,x2,u");
  EXPECT_EQ(first, "0,0,0.5");
  long rows = 1;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, g.spatial_size());
  EXPECT_THROW(write_csv_slice(path, u, 9), DomainError);
}
