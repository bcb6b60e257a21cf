#pragma once

// JSON run configuration for the command-line front end. Every object is
// checked for unknown keys; errors carry file:line:column where possible.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdtc/exchange.hpp"
#include "fdtc/floquet.hpp"
#include "fdtc/lattice.hpp"
#include "fdtc/model.hpp"
#include "json.hpp"

namespace fdtc::cli {

inline constexpr int kSchemaVersion = 1;

struct VortexSpec {
  std::vector<Site> sites;
  std::optional<double> density;
  std::uint64_t seed = 0;
};

struct RunConfig {
  int lx = 8;
  int ly = 8;
  Topology topology = Topology::kTorus;
  SectorSpec sector{1, 1};
  DriveParams params;
  /// Partial parameter overrides merged onto `params`, one per grid point.
  std::vector<DriveParams> grid;
  VortexSpec vortices;
  FloquetOptions floquet;

  int arm_length = 2;
  int exchange_steps = 32;
  Dir stem = Dir::kMinusY;
  double min_element = 1e-10;

  std::vector<int> degeneracy_sizes{8, 12, 16, 20};

  int periods = 1000;
  int stride = 1;
  int samples = 1;

  int oracle_steps = 64;
  double oracle_threshold = 1e-6;
  bool oracle_control = true;

  int k_grid = 24;
  int threads = 1;
  std::string out = "out";
};

/// Parse and validate; `origin` names the source in error messages.
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::string& path);

nlohmann::ordered_json to_json(const DriveParams& p);
nlohmann::ordered_json to_json(const RunConfig& c);

SectorSpec sector_from_string(const std::string& s);
std::string sector_code(const SectorSpec& s);  // "PA" style

LatticeSpec lattice_of(const RunConfig& c);
LatticeSpec lattice_of(const RunConfig& c, int L);
/// The explicit sites, or a seeded random configuration (seed + sample).
VortexConfig vortices_of(const RunConfig& c, const LatticeSpec& lat, int sample = 0);

}  // namespace fdtc::cli
