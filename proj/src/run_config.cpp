#include "gseq/run_config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace gseq {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::certify: return "certify";
    case Mode::solve: return "solve";
    case Mode::path: return "path";
    case Mode::sweep: return "sweep";
    case Mode::verify: return "verify";
    case Mode::export_: return "export";
  }
  return "?";
}

namespace {

Mode parse_mode(const std::string& s, const std::string& where) {
  if (s == "certify") return Mode::certify;
  if (s == "solve") return Mode::solve;
  if (s == "path") return Mode::path;
  if (s == "sweep") return Mode::sweep;
  if (s == "verify") return Mode::verify;
  if (s == "export") return Mode::export_;
  throw ConfigError(where + ": unknown mode \"" + s + "\"");
}

// Object reader that remembers which keys were consumed.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class T>
  std::optional<T> get(const std::string& key) {
    if (!has(key)) return std::nullopt;
    try {
      return raw(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(at(key) + ": wrong type");
    }
  }

  template <class T>
  T require(const std::string& key) {
    auto v = get<T>(key);
    if (!v) throw ConfigError(at(key) + ": missing required field");
    return *v;
  }

  template <class T>
  void opt(const std::string& key, T& target) {
    if (auto v = get<T>(key)) target = *v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()) + ": unknown key");
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void positive(double v, const std::string& where) {
  if (!(v > 0.0)) throw ConfigError(where + ": must be positive");
}

std::vector<int> wave_from(Obj& o, int n) {
  auto w = o.require<std::vector<int>>("modes");
  if (static_cast<int>(w.size()) != n)
    throw ConfigError(o.at("modes") + ": needs one integer per axis (" + std::to_string(n) + ")");
  return w;
}

CosineMode mode_from(Obj& o, int n) {
  CosineMode m;
  m.amplitude = o.require<double>("amplitude");
  m.wave = wave_from(o, n);
  o.opt("phase", m.phase);
  return m;
}

BoundarySpec parse_boundary(const json& j, const std::string& path, int n) {
  Obj o(j, path);
  BoundarySpec b;
  b.family = o.require<std::string>("family");
  if (b.family == "constant") {
    b.slice.constant = o.require<double>("value");
  } else if (b.family == "cosine") {
    o.opt("offset", b.slice.constant);
    b.slice.modes.push_back(mode_from(o, n));
  } else if (b.family == "two_modes") {
    o.opt("offset", b.slice.constant);
    const json& terms = o.raw("terms");
    if (!terms.is_array() || terms.size() != 2) throw ConfigError(o.at("terms") + ": expected an array of two modes");
    for (std::size_t i = 0; i < 2; ++i) {
      Obj t(terms[i], o.at("terms") + "[" + std::to_string(i) + "]");
      b.slice.modes.push_back(mode_from(t, n));
      t.finish();
    }
  } else if (b.family == "file") {
    b.path = o.require<std::string>("path");
  } else {
    throw ConfigError(o.at("family") + ": unknown family \"" + b.family + "\"");
  }
  o.finish();
  return b;
}

ojson boundary_json(const BoundarySpec& b) {
  ojson j;
  j["family"] = b.family;
  auto mode_json = [](const CosineMode& m) {
    return ojson{{"amplitude", m.amplitude}, {"modes", m.wave}, {"phase", m.phase}};
  };
  if (b.family == "constant") {
    j["value"] = b.slice.constant;
  } else if (b.family == "cosine") {
    j["offset"] = b.slice.constant;
    const auto m = mode_json(b.slice.modes.at(0));
    for (auto it = m.begin(); it != m.end(); ++it) j[it.key()] = it.value();
  } else if (b.family == "two_modes") {
    j["offset"] = b.slice.constant;
    j["terms"] = {mode_json(b.slice.modes.at(0)), mode_json(b.slice.modes.at(1))};
  } else {
    j["path"] = b.path;
  }
  return j;
}

void parse_solver(const json& j, const std::string& path, SolverConfig& s) {
  Obj o(j, path);
  o.opt("newton_tol", s.newton_tol);
  o.opt("max_newton", s.max_newton);
  o.opt("armijo_ratio", s.armijo_ratio);
  o.opt("armijo_slope", s.armijo_slope);
  o.opt("margin_floor", s.margin_floor);
  o.opt("path_steps", s.path_steps);
  o.opt("s_schedule", s.s_schedule);
  o.opt("linear_tol", s.linear_tol);
  o.opt("gmres_restart", s.gmres_restart);
  o.opt("gmres_max_iters", s.gmres_max_iters);
  o.opt("linear_solver", s.linear_solver);
  o.finish();
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("$: invalid JSON: ") + e.what());
  }
  Obj o(j, "$");
  RunConfig c;
  c.mode = parse_mode(o.require<std::string>("mode"), o.at("mode"));
  c.n = o.require<int>("n");
  c.k = o.require<int>("k");
  if (c.n < 1) throw ConfigError(o.at("n") + ": must be positive");
  if (c.k < 1) throw ConfigError(o.at("k") + ": must be positive");
  if (2 * c.k > c.n)
    throw ConfigError(o.at("k") + ": 2k ≤ n violated (n = " + std::to_string(c.n) + ", k = " + std::to_string(c.k) + ")");

  o.opt("seed", c.seed);
  o.opt("threads", c.threads);
  if (c.threads < 0) throw ConfigError(o.at("threads") + ": must be >= 0");
  o.opt("out", c.out);

  const bool export_from_file = c.mode == Mode::export_ && o.has("export") && j["export"].is_object() &&
                                j["export"].value("source", std::string("path")) == "file";
  const bool grid = c.mode != Mode::certify && !export_from_file;

  if (c.mode == Mode::certify) {
    c.samples = o.require<long>("samples");
    if (c.samples < 1) throw ConfigError(o.at("samples") + ": must be positive");
  } else {
    o.opt("samples", c.samples);
  }

  if (grid) {
    c.N = o.require<int>("N");
    c.Nt = o.require<int>("Nt");
  } else {
    o.opt("N", c.N);
    o.opt("Nt", c.Nt);
  }
  if (c.N < 4) throw ConfigError(o.at("N") + ": resolution must be at least 4");
  if (c.Nt < 3) throw ConfigError(o.at("Nt") + ": resolution must be at least 3");
  o.opt("L", c.L);
  positive(c.L, o.at("L"));
  o.opt("lambda0", c.lambda0);
  positive(c.lambda0, o.at("lambda0"));

  c.u0.slice = SliceSpec::flat(0.0);
  c.u1.slice = SliceSpec::flat(0.0);
  if (o.has("boundary")) {
    Obj b(o.raw("boundary"), o.at("boundary"));
    if (b.has("u0")) c.u0 = parse_boundary(b.raw("u0"), b.at("u0"), c.n);
    if (b.has("u1")) c.u1 = parse_boundary(b.raw("u1"), b.at("u1"), c.n);
    b.finish();
  }

  if (o.has("f")) {
    Obj f(o.raw("f"), o.at("f"));
    c.f.type = f.require<std::string>("type");
    if (c.f.type == "constant") {
      c.f.value = f.require<double>("value");
      positive(c.f.value, f.at("value"));
    } else if (c.f.type == "analytic") {
      f.opt("amplitude", c.f.amplitude);
    } else if (c.f.type == "file") {
      c.f.path = f.require<std::string>("path");
    } else {
      throw ConfigError(f.at("type") + ": unknown type \"" + c.f.type + "\"");
    }
    f.finish();
  }

  if (o.has("solver")) parse_solver(o.raw("solver"), o.at("solver"), c.solver);

  if (o.has("resolutions")) {
    c.resolutions = o.require<std::vector<int>>("resolutions");
    for (std::size_t i = 0; i < c.resolutions.size(); ++i)
      if (c.resolutions[i] < 4)
        throw ConfigError(o.at("resolutions") + "[" + std::to_string(i) + "]: resolution must be at least 4");
  }

  if (o.has("export")) {
    Obj e(o.raw("export"), o.at("export"));
    e.opt("levels", c.export_spec.levels);
    e.opt("source", c.export_spec.source);
    if (c.export_spec.source != "path" && c.export_spec.source != "file")
      throw ConfigError(e.at("source") + ": expected \"path\" or \"file\"");
    if (c.export_spec.source == "file") c.export_spec.field = e.require<std::string>("field");
    e.finish();
  }
  o.finish();

  if (grid) {
    for (std::size_t i = 0; i < c.export_spec.levels.size(); ++i) {
      const int l = c.export_spec.levels[i];
      if (l < 0 || l > c.Nt + 1)
        throw ConfigError("$.export.levels[" + std::to_string(i) + "]: level outside [0, Nt + 1]");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string RunConfig::to_json() const {
  ojson j;
  j["mode"] = mode_name(mode);
  j["n"] = n;
  j["k"] = k;
  j["N"] = N;
  j["Nt"] = Nt;
  j["L"] = L;
  j["lambda0"] = lambda0;
  j["samples"] = samples;
  j["seed"] = seed;
  j["threads"] = threads;
  j["boundary"] = {{"u0", boundary_json(u0)}, {"u1", boundary_json(u1)}};
  ojson fj{{"type", f.type}};
  if (f.type == "constant") fj["value"] = f.value;
  if (f.type == "analytic") fj["amplitude"] = f.amplitude;
  if (f.type == "file") fj["path"] = f.path;
  j["f"] = fj;
  j["solver"] = {{"newton_tol", solver.newton_tol},     {"max_newton", solver.max_newton},
                 {"armijo_ratio", solver.armijo_ratio}, {"armijo_slope", solver.armijo_slope},
                 {"margin_floor", solver.margin_floor}, {"path_steps", solver.path_steps},
                 {"s_schedule", solver.s_schedule},     {"linear_tol", solver.linear_tol},
                 {"gmres_restart", solver.gmres_restart}, {"gmres_max_iters", solver.gmres_max_iters},
                 {"linear_solver", solver.linear_solver}};
  j["resolutions"] = resolutions;
  ojson ej{{"levels", export_spec.levels}, {"source", export_spec.source}};
  if (export_spec.source == "file") ej["field"] = export_spec.field;
  j["export"] = ej;
  j["out"] = out;
  return j.dump(2) + "\n";
}

Eigen::VectorXd boundary_slice(const BoundarySpec& b, const GridGeometry& g) {
  if (b.family != "file") return b.slice.sample(g);
  std::ifstream in(b.path, std::ios::binary);
  if (!in) throw ConfigError("cannot read boundary file " + b.path);
  Eigen::VectorXd v(g.spatial_size());
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
    throw ConfigError("boundary file " + b.path + " holds fewer than N^n values");
  return v;
}

}  // namespace gseq
