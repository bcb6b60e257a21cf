#pragma once

// Plaquette/vertex geometry of the fermion lattice and the +-1 string signs
// that encode the mutual semion statistics of e-bosons and psi-fermions.
//
// Frozen conventions (every sign below depends on them):
//   * +x points right, +y points up.
//   * Plaquettes and vertices are indexed row-major from the top-left:
//       index(x, y) = (Ly - 1 - y) * Lx + x.
//   * Vertex (x, y) is the bottom-left corner of plaquette (x, y).
//   * The y-bond p -> p+y crosses the top edge of p. Its string collects the
//     vertices of that edge's vertex row (y+1) strictly to the right of its
//     left end: {(x', y+1) : x' > x}. The string never wraps in x.
//   * The x-bond crossing the x-boundary in plaquette row y carries
//     wx * prod over all vertices in vertex rows y+1 .. Ly-1.
//   * The y-bond crossing the y-boundary carries wy on top of its string.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fdtc/types.hpp"

namespace fdtc {

enum class Topology { kTorus, kCylinder };
enum class Axis { kX, kY };
enum class Dir { kPlusX, kMinusX, kPlusY, kMinusY };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);
std::string to_string(Dir d);

struct Site {
  int x = 0;
  int y = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

struct Neighbor {
  int index = -1;
  bool wrapped = false;
};

/// Lattice geometry. Torus: periodic in x and y. Cylinder: open in x,
/// periodic in y.
class LatticeSpec {
 public:
  LatticeSpec(int lx, int ly, Topology topology);

  int lx() const { return lx_; }
  int ly() const { return ly_; }
  Topology topology() const { return topology_; }
  int num_plaquettes() const { return lx_ * ly_; }
  int num_vertices() const { return lx_ * ly_; }

  int index(int x, int y) const { return (ly_ - 1 - y) * lx_ + x; }
  int index(Site s) const { return index(s.x, s.y); }
  Site site(int index) const;
  bool valid(int index) const { return index >= 0 && index < lx_ * ly_; }

  /// Neighbour of a plaquette (or vertex; same grid) in direction d; empty
  /// across the open x-edges of a cylinder.
  std::optional<Neighbor> neighbor(int index, Dir d) const;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

 private:
  int lx_;
  int ly_;
  Topology topology_;
};

LatticeSpec build_lattice(int lx, int ly, Topology topology);

/// Boundary sector: +1 periodic, -1 antiperiodic fermion boundary condition.
struct SectorSpec {
  int wx = 1;
  int wy = 1;
  friend bool operator==(const SectorSpec&, const SectorSpec&) = default;
};

SectorSpec make_sector(int wx, int wy);
std::vector<SectorSpec> all_sectors();
std::string sector_label(const SectorSpec& s);  // "(P,A)" style

/// Static e-boson occupations n_v in {0,1}, indexed like vertices.
class VortexConfig {
 public:
  VortexConfig() = default;
  /// Empty configuration on `lat`.
  explicit VortexConfig(const LatticeSpec& lat);
  /// Throws ConfigError on a torus if the number of occupied sites is odd.
  VortexConfig(const LatticeSpec& lat, std::vector<std::uint8_t> occupation);

  static VortexConfig from_sites(const LatticeSpec& lat,
                                 const std::vector<Site>& occupied);

  bool occupied(int vertex) const { return occ_.at(vertex) != 0; }
  int size() const { return static_cast<int>(occ_.size()); }
  int count() const;
  const std::vector<std::uint8_t>& occupation() const { return occ_; }
  std::vector<int> occupied_vertices() const;

  friend bool operator==(const VortexConfig&, const VortexConfig&) = default;
  friend bool operator<(const VortexConfig& a, const VortexConfig& b) {
    return a.occ_ < b.occ_;
  }

 private:
  std::vector<std::uint8_t> occ_;
};

struct VortexMove {
  int from_vertex = -1;
  Dir direction = Dir::kPlusX;
  /// Plaquettes whose fermion parity string accompanies the move; empty for
  /// horizontal moves.
  std::vector<int> string_plaquettes;
};

/// kDropped ignores the vortex strings entirely (negative control only).
enum class StringConvention { kStandard, kDropped };

/// prod over vertices of row y+1 strictly right of x of (-1)^{n_v}.
int vertical_string_sign(const LatticeSpec& lat, const VortexConfig& cfg, int p,
                         StringConvention conv = StringConvention::kStandard);

/// The sign multiplying tunnelling and pairing on the bond (p, p+axis).
/// Throws ConfigError if the bond does not exist.
int bond_coupling_sign(const LatticeSpec& lat, const VortexConfig& cfg,
                       const SectorSpec& sector, int p, Axis axis,
                       StringConvention conv = StringConvention::kStandard);

struct Bond {
  int from = -1;
  int to = -1;
  Axis axis = Axis::kX;
  bool wrapped = false;
};

/// Every bond (p, p+x) and (p, p+y) present on the lattice, one per plaquette
/// and axis. On a 2-wide torus two bonds can join the same pair of sites.
std::vector<Bond> lattice_bonds(const LatticeSpec& lat);

/// Product of bond signs along a closed loop of plaquettes. Consecutive
/// entries must be neighbours; the last entry connects back to the first.
int loop_flux(const LatticeSpec& lat, const VortexConfig& cfg,
              const SectorSpec& sector, const std::vector<int>& loop);

/// Hop the single e-boson across the edge between v and v+dir.
std::pair<VortexConfig, VortexMove> move_vortex(const LatticeSpec& lat,
                                                const VortexConfig& cfg, int v,
                                                Dir dir);

/// Random configuration with an even number of bosons, each vertex occupied
/// with probability `density` (one site toggled if parity is odd).
VortexConfig random_vortex_config(const LatticeSpec& lat, double density,
                                  std::uint64_t seed);

}  // namespace fdtc
