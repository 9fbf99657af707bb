#include "gseq/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace gseq {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

std::string geometry_json(const GridGeometry& g) {
  nlohmann::ordered_json j;
  j["n"] = g.n();
  j["k"] = g.k();
  j["N"] = g.N();
  j["Nt"] = g.Nt();
  j["L"] = g.L();
  j["lambda0"] = g.lambda0();
  j["dtype"] = "float64-le";
  j["order"] = "t,x1,...,xn";
  return j.dump(2) + "\n";
}

GridGeometry geometry_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return GridGeometry(j.at("n").get<int>(), j.at("k").get<int>(), j.at("N").get<int>(), j.at("Nt").get<int>(),
                      j.at("L").get<double>(), j.at("lambda0").get<double>());
}

void write_field(const std::string& stem, const SpaceTimeField& u) {
  std::ofstream bin(stem + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + stem + ".bin for writing");
  bin.write(reinterpret_cast<const char*>(u.values().data()),
            static_cast<std::streamsize>(u.values().size() * sizeof(double)));
  std::ofstream js(stem + ".json");
  if (!js) throw std::runtime_error("cannot open " + stem + ".json for writing");
  js << geometry_json(u.geometry());
}

SpaceTimeField read_field(const std::string& stem) {
  std::ifstream js(stem + ".json");
  if (!js) throw std::runtime_error("cannot open " + stem + ".json");
  std::stringstream ss;
  ss << js.rdbuf();
  const GridGeometry g = geometry_from_json(ss.str());
  std::ifstream bin(stem + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + stem + ".bin");
  Eigen::VectorXd v(g.size());
  bin.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (bin.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
    throw std::runtime_error(stem + ".bin is shorter than its header declares");
  return SpaceTimeField(g, std::move(v));
}

void write_csv_slice(const std::string& path, const SpaceTimeField& u, int level) {
  const GridGeometry& g = u.geometry();
  if (level < 0 || level >= g.levels()) throw DomainError("write_csv_slice: level out of range");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (int a = 0; a < g.n(); ++a) out << "x" << a + 1 << ",";
  out << "u\n" << std::setprecision(17);
  for (long s = 0; s < g.spatial_size(); ++s) {
    const Eigen::VectorXd x = g.position(s);
    for (int a = 0; a < g.n(); ++a) out << x(a) << ",";
    out << u(level, s) << "\n";
  }
}

}  // namespace gseq
