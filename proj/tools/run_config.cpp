#include "run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace fdtc::cli {

using nlohmann::json;

namespace {

// Position of the first occurrence of "key" in the raw text, as "line:col".
std::string locate(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return "";
  int line = 1, col = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

class Reader {
 public:
  Reader(const json& j, std::string path, const std::string& text, const std::string& origin)
      : j_(j), path_(std::move(path)), text_(text), origin_(origin) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(key, "wrong type for '" + name(key) + "'");
    }
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    return Reader(j_.at(key), name(key), text_, origin_);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail(k, "unknown key '" + name(k) + "'");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const std::string at = locate(text_, key);
    throw ConfigError(origin_ + (at.empty() ? "" : ":" + at) + ": " + msg);
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  const std::string& text_;
  const std::string& origin_;
  std::set<std::string> seen_;
};

DriveParams read_params(Reader r, DriveParams base) {
  base.g = r.get("g", base.g);
  base.J = r.get("J", base.J);
  base.Delta = r.get("Delta", base.Delta);
  base.omega = r.get("omega", base.omega);
  base.phi_x = r.get("phi_x", base.phi_x);
  base.phi_y = r.get("phi_y", base.phi_y);
  base.t0 = r.get("t0", base.t0);
  r.finish();
  return base;
}

Dir dir_from_string(const std::string& s) {
  if (s == "+x") return Dir::kPlusX;
  if (s == "-x") return Dir::kMinusX;
  if (s == "+y") return Dir::kPlusY;
  if (s == "-y") return Dir::kMinusY;
  throw ConfigError("unknown direction '" + s + "' (expected +x|-x|+y|-y)");
}

template <typename F>
auto rethrow_at(Reader& r, const std::string& key, F f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    r.fail(key, e.what());
  }
}

}  // namespace

SectorSpec sector_from_string(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != '(' && c != ')' && c != ',' && c != ' ') t += c;
  if (t.size() == 2) {
    auto bc = [&](char c) -> int {
      if (c == 'P' || c == 'p') return 1;
      if (c == 'A' || c == 'a') return -1;
      return 0;
    };
    const int wx = bc(t[0]), wy = bc(t[1]);
    if (wx && wy) return {wx, wy};
  }
  throw ConfigError("unknown sector '" + s + "' (expected PP|PA|AP|AA)");
}

std::string sector_code(const SectorSpec& s) {
  return std::string(1, s.wx > 0 ? 'P' : 'A') + (s.wy > 0 ? 'P' : 'A');
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto cut = what.find("syntax error");
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": malformed JSON: " + (cut == std::string::npos ? what : what.substr(cut)));
  }

  RunConfig c;
  Reader top(j, "", text, origin);

  if (top.has("lattice")) {
    Reader r = top.child("lattice");
    const int L = r.get("L", 0);
    c.lx = r.get("Lx", L ? L : c.lx);
    c.ly = r.get("Ly", L ? L : c.ly);
    const std::string topo = r.get<std::string>("topology", "torus");
    c.topology = rethrow_at(r, "topology", [&] { return topology_from_string(topo); });
    r.finish();
    rethrow_at(r, "lattice", [&] { return LatticeSpec(c.lx, c.ly, c.topology); });
  }
  if (top.has("sector")) {
    const std::string s = top.get<std::string>("sector", "PP");
    c.sector = rethrow_at(top, "sector", [&] { return sector_from_string(s); });
  }
  if (top.has("params")) c.params = read_params(top.child("params"), c.params);
  rethrow_at(top, "params", [&] {
    validate(c.params);
    return 0;
  });
  if (top.has("grid")) {
    const json& g = top.raw("grid");
    if (!g.is_array()) top.fail("grid", "'grid' must be an array of parameter objects");
    for (std::size_t i = 0; i < g.size(); ++i) {
      DriveParams p = read_params(Reader(g[i], "grid[" + std::to_string(i) + "]", text, origin), c.params);
      c.grid.push_back(p);
    }
  }
  if (top.has("vortices")) {
    Reader r = top.child("vortices");
    if (r.has("sites")) {
      const auto sites = r.get<std::vector<std::vector<int>>>("sites", {});
      for (const auto& s : sites) {
        if (s.size() != 2) r.fail("sites", "each vortex site must be [x, y]");
        c.vortices.sites.push_back({s[0], s[1]});
      }
    }
    if (r.has("density")) c.vortices.density = r.get("density", 0.0);
    c.vortices.seed = r.get<std::uint64_t>("seed", 0);
    r.finish();
    if (!c.vortices.sites.empty() && c.vortices.density)
      r.fail("density", "give either vortex 'sites' or 'density', not both");
    if (c.vortices.density && (*c.vortices.density < 0 || *c.vortices.density > 1))
      r.fail("density", "density must lie in [0, 1]");
  }
  if (top.has("floquet")) {
    Reader r = top.child("floquet");
    const std::string frame = r.get<std::string>("frame", "rotated");
    if (frame == "rotated") c.floquet.frame = Frame::kRotated;
    else if (frame == "lab") c.floquet.frame = Frame::kLab;
    else r.fail("frame", "unknown frame '" + frame + "' (expected rotated|lab)");
    c.floquet.propagation.n_steps = r.get("n_steps", c.floquet.propagation.n_steps);
    const std::string integ = r.get<std::string>("integrator", "cf4");
    if (integ == "cf4") c.floquet.propagation.scheme = Integrator::kCommutatorFree4;
    else if (integ == "midpoint") c.floquet.propagation.scheme = Integrator::kMidpoint;
    else r.fail("integrator", "unknown integrator '" + integ + "' (expected cf4|midpoint)");
    c.floquet.half_zone_shift = r.get("half_zone_shift", false);
    r.finish();
    if (c.floquet.propagation.n_steps < 1) r.fail("n_steps", "n_steps must be positive");
  }
  if (top.has("exchange")) {
    Reader r = top.child("exchange");
    c.arm_length = r.get("arm_length", c.arm_length);
    c.exchange_steps = r.get("n_steps", c.exchange_steps);
    const std::string stem = r.get<std::string>("stem", "-y");
    c.stem = rethrow_at(r, "stem", [&] { return dir_from_string(stem); });
    c.min_element = r.get("min_element", c.min_element);
    r.finish();
    if (!(c.min_element >= 0.0)) r.fail("min_element", "min_element must be non-negative");
    if (c.arm_length < 1) r.fail("arm_length", "arm_length must be >= 1");
    if (c.exchange_steps < 1) r.fail("n_steps", "n_steps must be positive");
  }
  if (top.has("degeneracy")) {
    Reader r = top.child("degeneracy");
    c.degeneracy_sizes = r.get("L", c.degeneracy_sizes);
    r.finish();
    if (c.degeneracy_sizes.empty()) r.fail("L", "degeneracy needs at least one size");
  }
  if (top.has("heating")) {
    Reader r = top.child("heating");
    c.periods = r.get("periods", c.periods);
    c.stride = r.get("stride", c.stride);
    c.samples = r.get("samples", c.samples);
    r.finish();
    if (c.periods < 0 || c.stride < 1 || c.samples < 1)
      r.fail("heating", "heating needs periods >= 0, stride >= 1, samples >= 1");
  }
  if (top.has("oracle")) {
    Reader r = top.child("oracle");
    c.oracle_steps = r.get("n_steps", c.oracle_steps);
    c.oracle_threshold = r.get("threshold", c.oracle_threshold);
    c.oracle_control = r.get("control", c.oracle_control);
    r.finish();
  }
  if (top.has("chern")) {
    Reader r = top.child("chern");
    c.k_grid = r.get("k_grid", c.k_grid);
    r.finish();
  }
  c.threads = top.get("threads", c.threads);
  c.out = top.get("out", c.out);
  top.finish();
  if (c.threads < 1) top.fail("threads", "threads must be >= 1");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

nlohmann::ordered_json to_json(const DriveParams& p) {
  return {{"g", p.g}, {"J", p.J}, {"Delta", p.Delta}, {"omega", p.omega},
          {"phi_x", p.phi_x}, {"phi_y", p.phi_y}, {"t0", p.t0}};
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["lattice"] = {{"Lx", c.lx}, {"Ly", c.ly}, {"topology", to_string(c.topology)}};
  j["sector"] = sector_code(c.sector);
  j["params"] = to_json(c.params);
  if (!c.grid.empty()) {
    j["grid"] = nlohmann::ordered_json::array();
    for (const auto& p : c.grid) j["grid"].push_back(to_json(p));
  }
  nlohmann::ordered_json v;
  if (c.vortices.density) {
    v["density"] = *c.vortices.density;
    v["seed"] = c.vortices.seed;
  } else {
    v["sites"] = nlohmann::ordered_json::array();
    for (const Site& s : c.vortices.sites) v["sites"].push_back({s.x, s.y});
  }
  j["vortices"] = v;
  j["floquet"] = {{"frame", c.floquet.frame == Frame::kRotated ? "rotated" : "lab"},
                  {"n_steps", c.floquet.propagation.n_steps},
                  {"integrator", c.floquet.propagation.scheme == Integrator::kCommutatorFree4 ? "cf4" : "midpoint"},
                  {"half_zone_shift", c.floquet.half_zone_shift}};
  j["exchange"] = {{"arm_length", c.arm_length}, {"n_steps", c.exchange_steps}, {"stem", to_string(c.stem)},
                     {"min_element", c.min_element}};
  j["degeneracy"] = {{"L", c.degeneracy_sizes}};
  j["heating"] = {{"periods", c.periods}, {"stride", c.stride}, {"samples", c.samples}};
  j["oracle"] = {{"n_steps", c.oracle_steps}, {"threshold", c.oracle_threshold}, {"control", c.oracle_control}};
  j["chern"] = {{"k_grid", c.k_grid}};
  j["threads"] = c.threads;
  j["out"] = c.out;
  return j;
}

LatticeSpec lattice_of(const RunConfig& c) { return LatticeSpec(c.lx, c.ly, c.topology); }

LatticeSpec lattice_of(const RunConfig& c, int L) { return LatticeSpec(L, L, c.topology); }

VortexConfig vortices_of(const RunConfig& c, const LatticeSpec& lat, int sample) {
  if (c.vortices.density) return random_vortex_config(lat, *c.vortices.density, c.vortices.seed + sample);
  for (const Site& s : c.vortices.sites)
    if (s.x < 0 || s.x >= lat.lx() || s.y < 0 || s.y >= lat.ly())
      throw ConfigError("vortex site (" + std::to_string(s.x) + ", " + std::to_string(s.y) +
                        ") outside the lattice");
  if (lat.topology() == Topology::kTorus && c.vortices.sites.size() % 2)
    throw ConfigError("a torus needs an even number of vortices");
  return VortexConfig::from_sites(lat, c.vortices.sites);
}

}  // namespace fdtc::cli
