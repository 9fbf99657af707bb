#include <gtest/gtest.h>

#include "gseq/run_config.hpp"

using namespace gseq;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalCertify) {
  const RunConfig c = parse_config(R"({"mode": "certify", "n": 4, "k": 2, "samples": 10})");
  EXPECT_EQ(c.mode, Mode::certify);
  EXPECT_EQ(c.samples, 10);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_DOUBLE_EQ(c.lambda0, 0.5);
}

TEST(Config, GridModeWithBoundaryAndSolver) {
  const RunConfig c = parse_config(R"({
    "mode": "path", "n": 2, "k": 1, "N": 8, "Nt": 7,
    "boundary": {"u0": {"family": "cosine", "amplitude": 0.1, "modes": [1, 0]},
                 "u1": {"family": "constant", "value": 0.5}},
    "f": {"type": "constant", "value": 2.0},
    "solver": {"newton_tol": 1e-9, "path_steps": 4}
  })");
  EXPECT_EQ(c.mode, Mode::path);
  EXPECT_EQ(c.u0.family, "cosine");
  EXPECT_EQ(c.f.value, 2.0);
  EXPECT_EQ(c.solver.newton_tol, 1e-9);
  EXPECT_EQ(c.solver.path_steps, 4);
  const GridGeometry g = c.geometry();
  const Eigen::VectorXd u1 = boundary_slice(c.u1, g);
  EXPECT_EQ(u1(3), 0.5);
  const Eigen::VectorXd u0 = boundary_slice(c.u0, g);
  EXPECT_NEAR(u0(0), 0.1, 1e-15);
}

TEST(Config, ErrorsCarryJsonPaths) {
  EXPECT_EQ(error_of(R"({"mode": "certify", "n": 3, "k": 2, "samples": 5})"),
            "$.k: 2k ≤ n violated (n = 3, k = 2)");
  EXPECT_EQ(error_of(R"({"mode": "certify", "n": 2, "k": 1})"), "$.samples: missing required field");
  EXPECT_EQ(error_of(R"({"mode": "solve", "n": 2, "k": 1, "N": 8})"), "$.Nt: missing required field");
  EXPECT_EQ(error_of(R"({"mode": "certify", "n": 2, "k": 1, "samples": 5, "extra": 1})"), "$.extra: unknown key");
  EXPECT_EQ(error_of(R"({"mode": "certify", "n": "two", "k": 1, "samples": 5})"), "$.n: wrong type");
  EXPECT_EQ(error_of(R"({"mode": "fly", "n": 2, "k": 1})"), "$.mode: unknown mode \"fly\"");
  EXPECT_EQ(error_of(R"({"mode": "solve", "n": 2, "k": 1, "N": 3, "Nt": 5})"),
            "$.N: resolution must be at least 4");
  EXPECT_NE(error_of(R"({"mode": "solve", "n": 2, "k": 1, "N": 8, "Nt": 7,
                         "boundary": {"u0": {"family": "cosine", "amplitude": 0.1, "modes": [1]}}})")
                .find("$.boundary.u0.modes"),
            std::string::npos);
  EXPECT_NE(error_of("{not json").find("$: invalid JSON"), std::string::npos);
}

TEST(Config, ResolvedConfigRoundTrips) {
  const RunConfig c = parse_config(R"({"mode": "sweep", "n": 2, "k": 1, "N": 8, "Nt": 7})");
  const RunConfig d = parse_config(c.to_json());
  EXPECT_EQ(d.to_json(), c.to_json());
  EXPECT_EQ(mode_name(d.mode), "sweep");
}
