// JSON run configuration for the gs tool. Unknown keys are rejected and every
// error message carries the JSON path of the offending field.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gseq/analytic.hpp"
#include "gseq/solver.hpp"

namespace gseq {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { certify, solve, path, sweep, verify, export_ };

std::string mode_name(Mode m);

struct BoundarySpec {
  std::string family = "constant";  // constant | cosine | two_modes | file
  SliceSpec slice;                  // analytic families
  std::string path;                 // file: raw float64 values, one per spatial point
};

struct FSpec {
  std::string type = "constant";  // constant | analytic | file
  double value = 1.0;             // constant
  double amplitude = 0.1;         // analytic: manufactured solution amplitude
  std::string path;               // file: field stem
};

struct ExportSpec {
  std::vector<int> levels;       // empty: first, middle and last level
  std::string source = "path";   // path (solve first) | file
  std::string field;             // file: field stem
};

struct RunConfig {
  Mode mode = Mode::certify;
  int n = 2;
  int k = 1;
  int N = 16;
  int Nt = 17;
  double L = 2.0 * M_PI;
  double lambda0 = 0.5;
  long samples = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  BoundarySpec u0;
  BoundarySpec u1;
  FSpec f;
  SolverConfig solver;
  std::vector<int> resolutions;
  ExportSpec export_spec;
  std::string out = "gs_out";

  GridGeometry geometry() const { return GridGeometry(n, k, N, Nt, L, lambda0); }
  /// Resolved configuration with every default filled in.
  std::string to_json() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Boundary slice on the geometry (reads the file family from disk).
Eigen::VectorXd boundary_slice(const BoundarySpec& b, const GridGeometry& g);

}  // namespace gseq
