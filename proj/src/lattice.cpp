#include "fdtc/lattice.hpp"

#include <random>

namespace fdtc {

std::string to_string(Topology t) {
  return t == Topology::kTorus ? "torus" : "cylinder";
}

Topology topology_from_string(const std::string& s) {
  if (s == "torus") return Topology::kTorus;
  if (s == "cylinder") return Topology::kCylinder;
  throw ConfigError("unknown topology '" + s + "' (expected torus|cylinder)");
}

std::string to_string(Dir d) {
  switch (d) {
    case Dir::kPlusX: return "+x";
    case Dir::kMinusX: return "-x";
    case Dir::kPlusY: return "+y";
    case Dir::kMinusY: return "-y";
  }
  return "?";
}

LatticeSpec::LatticeSpec(int lx, int ly, Topology topology)
    : lx_(lx), ly_(ly), topology_(topology) {
  if (lx < 2 || ly < 2)
    throw ConfigError("lattice dimensions must be >= 2, got " +
                      std::to_string(lx) + "x" + std::to_string(ly));
  if (topology == Topology::kTorus && (lx % 2 != 0 || ly % 2 != 0))
    throw ConfigError("torus dimensions must be even, got " +
                      std::to_string(lx) + "x" + std::to_string(ly));
}

Site LatticeSpec::site(int index) const {
  if (!valid(index))
    throw ConfigError("site index out of range: " + std::to_string(index));
  return {index % lx_, ly_ - 1 - index / lx_};
}

std::optional<Neighbor> LatticeSpec::neighbor(int idx, Dir d) const {
  Site s = site(idx);
  bool wrapped = false;
  switch (d) {
    case Dir::kPlusX:
      if (++s.x == lx_) { s.x = 0; wrapped = true; }
      break;
    case Dir::kMinusX:
      if (--s.x < 0) { s.x = lx_ - 1; wrapped = true; }
      break;
    case Dir::kPlusY:
      if (++s.y == ly_) { s.y = 0; wrapped = true; }
      break;
    case Dir::kMinusY:
      if (--s.y < 0) { s.y = ly_ - 1; wrapped = true; }
      break;
  }
  bool along_x = d == Dir::kPlusX || d == Dir::kMinusX;
  if (wrapped && along_x && topology_ == Topology::kCylinder) return std::nullopt;
  return Neighbor{index(s), wrapped};
}

LatticeSpec build_lattice(int lx, int ly, Topology topology) {
  return LatticeSpec(lx, ly, topology);
}

SectorSpec make_sector(int wx, int wy) {
  if ((wx != 1 && wx != -1) || (wy != 1 && wy != -1))
    throw ConfigError("sector signs must be +1 or -1");
  return {wx, wy};
}

std::vector<SectorSpec> all_sectors() {
  return {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
}

std::string sector_label(const SectorSpec& s) {
  std::string out = "(";
  out += s.wx > 0 ? 'P' : 'A';
  out += ',';
  out += s.wy > 0 ? 'P' : 'A';
  out += ')';
  return out;
}

VortexConfig::VortexConfig(const LatticeSpec& lat)
    : occ_(static_cast<std::size_t>(lat.num_vertices()), 0) {}

VortexConfig::VortexConfig(const LatticeSpec& lat,
                           std::vector<std::uint8_t> occupation)
    : occ_(std::move(occupation)) {
  if (static_cast<int>(occ_.size()) != lat.num_vertices())
    throw ConfigError("vortex occupation has " + std::to_string(occ_.size()) +
                      " entries, lattice has " +
                      std::to_string(lat.num_vertices()) + " vertices");
  for (auto& n : occ_) {
    if (n > 1) throw ConfigError("vortex occupations must be 0 or 1");
  }
  if (lat.topology() == Topology::kTorus && count() % 2 != 0)
    throw ConfigError("odd number of e-bosons on a torus");
}

VortexConfig VortexConfig::from_sites(const LatticeSpec& lat,
                                      const std::vector<Site>& occupied) {
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(lat.num_vertices()), 0);
  for (const Site& s : occupied) {
    if (s.x < 0 || s.x >= lat.lx() || s.y < 0 || s.y >= lat.ly())
      throw ConfigError("vortex site (" + std::to_string(s.x) + "," +
                        std::to_string(s.y) + ") outside the lattice");
    auto& n = occ[static_cast<std::size_t>(lat.index(s))];
    if (n) throw ConfigError("vortex site listed twice");
    n = 1;
  }
  return VortexConfig(lat, std::move(occ));
}

int VortexConfig::count() const {
  int c = 0;
  for (auto n : occ_) c += n;
  return c;
}

std::vector<int> VortexConfig::occupied_vertices() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (occ_[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

namespace {

void check_config(const LatticeSpec& lat, const VortexConfig& cfg) {
  if (cfg.size() != lat.num_vertices())
    throw ConfigError("vortex configuration does not match lattice size");
}

int row_parity(const LatticeSpec& lat, const VortexConfig& cfg, int row,
               int x_begin) {
  int s = 1;
  for (int x = x_begin; x < lat.lx(); ++x)
    if (cfg.occupied(lat.index(x, row))) s = -s;
  return s;
}

}  // namespace

int vertical_string_sign(const LatticeSpec& lat, const VortexConfig& cfg, int p,
                         StringConvention conv) {
  check_config(lat, cfg);
  Site s = lat.site(p);
  if (conv == StringConvention::kDropped) return 1;
  return row_parity(lat, cfg, (s.y + 1) % lat.ly(), s.x + 1);
}

int bond_coupling_sign(const LatticeSpec& lat, const VortexConfig& cfg,
                       const SectorSpec& sector, int p, Axis axis,
                       StringConvention conv) {
  check_config(lat, cfg);
  if (axis == Axis::kY) {
    auto nb = lat.neighbor(p, Dir::kPlusY);
    int s = vertical_string_sign(lat, cfg, p, conv);
    return nb->wrapped ? s * sector.wy : s;
  }
  auto nb = lat.neighbor(p, Dir::kPlusX);
  if (!nb)
    throw ConfigError("no x-bond leaves plaquette " + std::to_string(p) +
                      " across the open cylinder edge");
  if (!nb->wrapped) return 1;
  int s = sector.wx;
  if (conv == StringConvention::kDropped) return s;
  for (int row = lat.site(p).y + 1; row < lat.ly(); ++row)
    s *= row_parity(lat, cfg, row, 0);
  return s;
}

std::vector<Bond> lattice_bonds(const LatticeSpec& lat) {
  std::vector<Bond> out;
  out.reserve(static_cast<std::size_t>(2 * lat.num_plaquettes()));
  for (int p = 0; p < lat.num_plaquettes(); ++p) {
    if (auto nb = lat.neighbor(p, Dir::kPlusX))
      out.push_back({p, nb->index, Axis::kX, nb->wrapped});
    auto nb = lat.neighbor(p, Dir::kPlusY);
    out.push_back({p, nb->index, Axis::kY, nb->wrapped});
  }
  return out;
}

int loop_flux(const LatticeSpec& lat, const VortexConfig& cfg,
              const SectorSpec& sector, const std::vector<int>& loop) {
  if (loop.size() < 2) throw ConfigError("loop needs at least two plaquettes");
  int s = 1;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    int a = loop[i];
    int b = loop[(i + 1) % loop.size()];
    // On a 2-wide lattice +x and -x reach the same plaquette; +x wins.
    if (auto n = lat.neighbor(a, Dir::kPlusX); n && n->index == b) {
      s *= bond_coupling_sign(lat, cfg, sector, a, Axis::kX);
    } else if (n = lat.neighbor(a, Dir::kMinusX); n && n->index == b) {
      s *= bond_coupling_sign(lat, cfg, sector, b, Axis::kX);
    } else if (lat.neighbor(a, Dir::kPlusY)->index == b) {
      s *= bond_coupling_sign(lat, cfg, sector, a, Axis::kY);
    } else if (lat.neighbor(a, Dir::kMinusY)->index == b) {
      s *= bond_coupling_sign(lat, cfg, sector, b, Axis::kY);
    } else {
      throw ConfigError("loop is not closed: plaquettes " + std::to_string(a) +
                        " and " + std::to_string(b) + " are not neighbours");
    }
  }
  return s;
}

std::pair<VortexConfig, VortexMove> move_vortex(const LatticeSpec& lat,
                                                const VortexConfig& cfg, int v,
                                                Dir dir) {
  check_config(lat, cfg);
  auto nb = lat.neighbor(v, dir);
  if (!nb || nb->wrapped)
    throw ConfigError("vortex move from vertex " + std::to_string(v) + " " +
                      to_string(dir) + " crosses a boundary identification");
  int w = nb->index;
  if (cfg.occupied(v) == cfg.occupied(w))
    throw ConfigError("vortex move " + std::to_string(v) + "->" +
                      std::to_string(w) +
                      " needs exactly one occupied endpoint");

  auto occ = cfg.occupation();
  std::swap(occ[static_cast<std::size_t>(v)], occ[static_cast<std::size_t>(w)]);

  VortexMove mv;
  mv.from_vertex = v;
  mv.direction = dir;
  if (dir == Dir::kPlusY || dir == Dir::kMinusY) {
    // The traversed vertical edge is the left edge of plaquette p(lower end);
    // the string covers that plaquette row to the left of the edge.
    Site lower = lat.site(dir == Dir::kPlusY ? v : w);
    for (int x = 0; x < lower.x; ++x)
      mv.string_plaquettes.push_back(lat.index(x, lower.y));
  }
  return {VortexConfig(lat, std::move(occ)), std::move(mv)};
}

VortexConfig random_vortex_config(const LatticeSpec& lat, double density,
                                  std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0))
    throw ConfigError("vortex density must lie in [0,1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(lat.num_vertices()));
  int count = 0;
  for (auto& n : occ) {
    n = coin(rng) ? 1 : 0;
    count += n;
  }
  if (count % 2 != 0) {
    std::uniform_int_distribution<int> pick(0, lat.num_vertices() - 1);
    auto& n = occ[static_cast<std::size_t>(pick(rng))];
    n ^= 1;
  }
  return VortexConfig(lat, std::move(occ));
}

}  // namespace fdtc
