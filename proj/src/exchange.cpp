#include "fdtc/exchange.hpp"

#include <algorithm>
#include <cmath>

namespace fdtc {

namespace {

Dir opposite(Dir d) {
  switch (d) {
    case Dir::kPlusX: return Dir::kMinusX;
    case Dir::kMinusX: return Dir::kPlusX;
    case Dir::kPlusY: return Dir::kMinusY;
    case Dir::kMinusY: return Dir::kPlusY;
  }
  return d;
}

Site offset(Site s, Dir d, int n) {
  switch (d) {
    case Dir::kPlusX: return {s.x + n, s.y};
    case Dir::kMinusX: return {s.x - n, s.y};
    case Dir::kPlusY: return {s.x, s.y + n};
    case Dir::kMinusY: return {s.x, s.y - n};
  }
  return s;
}

// Moves the vortex on `from` n steps along d, appending to the path.
void leg(const LatticeSpec& lat, ExchangePath& path, int from, Dir d, int n) {
  int v = from;
  for (int k = 0; k < n; ++k) {
    auto [next, mv] = move_vortex(lat, path.configs.back(), v, d);
    v = lat.neighbor(v, d)->index;
    path.steps.push_back(std::move(mv));
    path.configs.push_back(std::move(next));
  }
}

}  // namespace

SectorSpec fusion_boundary(Fusion f) {
  return f == Fusion::kVacuum ? SectorSpec{-1, -1} : SectorSpec{1, 1};
}

std::string to_string(Fusion f) { return f == Fusion::kVacuum ? "vacuum" : "fermion"; }

Fusion fusion_from_string(const std::string& s) {
  if (s == "vacuum") return Fusion::kVacuum;
  if (s == "fermion") return Fusion::kFermion;
  throw ConfigError("unknown fusion sector '" + s + "' (expected vacuum or fermion)");
}

double wrap_phase(double x) {
  double y = std::remainder(x, 2 * kPi);
  if (y <= -kPi) y += 2 * kPi;
  return y;
}

int default_junction_center(const LatticeSpec& lat) {
  return lat.index(lat.lx() / 2, lat.ly() / 2);
}

TJunction make_junction(const LatticeSpec& lat, int center, int arm_length, Dir stem) {
  if (!lat.valid(center)) throw ConfigError("junction vertex out of range");
  if (arm_length < 1) throw ConfigError("arm length must be at least 1");
  if (stem != Dir::kMinusY && stem != Dir::kPlusY)
    throw ConfigError("the junction stem must point along y");
  const Site o = lat.site(center);
  const Site a = offset(o, Dir::kMinusX, arm_length);
  const Site b = offset(o, Dir::kPlusX, arm_length);
  const Site c = offset(o, stem, arm_length);
  const int margin = 2;
  for (Site s : {a, b, c}) {
    if (s.x < margin || s.x > lat.lx() - 1 - margin || s.y < margin ||
        s.y > lat.ly() - 1 - margin)
      throw ConfigError("T-junction at (" + std::to_string(o.x) + "," + std::to_string(o.y) +
                        ") with arm length " + std::to_string(arm_length) +
                        " comes within 2 sites of a boundary identification");
  }
  return {center, arm_length, lat.index(a), lat.index(b), lat.index(c)};
}

std::pair<ExchangePath, ExchangePath> build_levin_wen_paths(const LatticeSpec& lat,
                                                            int junction, int arm_length,
                                                            Dir stem) {
  const TJunction t = make_junction(lat, junction, arm_length, stem);
  const VortexConfig start =
      VortexConfig::from_sites(lat, {lat.site(t.a), lat.site(t.b)});
  auto init = [&](PathLabel label) {
    ExchangePath p;
    p.initial = start;
    p.label = label;
    p.configs.push_back(start);
    return p;
  };
  ExchangePath p = init(PathLabel::kP);
  leg(lat, p, t.a, Dir::kPlusX, arm_length);
  leg(lat, p, t.center, stem, arm_length);
  leg(lat, p, t.b, Dir::kMinusX, arm_length);

  ExchangePath q = init(PathLabel::kPPrime);
  leg(lat, q, t.b, Dir::kMinusX, arm_length);
  leg(lat, q, t.center, stem, arm_length);
  leg(lat, q, t.a, Dir::kPlusX, arm_length);

  if (move_multiset(p) != move_multiset(q))
    throw NumericalError("Levin-Wen paths do not share their moves");
  if (!(p.configs.back() == q.configs.back()))
    throw NumericalError("Levin-Wen paths do not share their end point");
  return {std::move(p), std::move(q)};
}

ExchangePath reversed(const LatticeSpec& lat, const ExchangePath& path) {
  ExchangePath r;
  r.label = path.label;
  r.initial = path.configs.back();
  r.configs.push_back(r.initial);
  for (auto it = path.steps.rbegin(); it != path.steps.rend(); ++it) {
    const int to = lat.neighbor(it->from_vertex, it->direction)->index;
    auto [next, mv] = move_vortex(lat, r.configs.back(), to, opposite(it->direction));
    r.steps.push_back(std::move(mv));
    r.configs.push_back(std::move(next));
  }
  return r;
}

std::multiset<std::tuple<int, int, std::vector<int>>> move_multiset(const ExchangePath& path) {
  std::multiset<std::tuple<int, int, std::vector<int>>> out;
  for (const auto& m : path.steps)
    out.insert({m.from_vertex, static_cast<int>(m.direction), m.string_plaquettes});
  return out;
}

BogoliubovBasis floquet_ground_basis(const LatticeSpec& lat, const VortexConfig& cfg,
                                     const SectorSpec& sector, const DriveParams& params,
                                     const FloquetOptions& opts, bool* corrected) {
  const FloquetResult r = floquet(lat, cfg, sector, params, opts);
  const BogoliubovBasis b = diagonalize(r.H_F);
  if (corrected) *corrected = b.parity != 1;
  return physical_ground(b, 1);
}

GroundState ground_state_for(const LatticeSpec& lat, const VortexConfig& cfg,
                             const SectorSpec& sector, const DriveParams& params,
                             const BogoliubovBasis& reference, const FloquetOptions& opts) {
  GroundState g;
  g.basis = floquet_ground_basis(lat, cfg, sector, params, opts, &g.parity_corrected);
  g.state = thouless(reference, g.basis);
  return g;
}

cplx step_element(const BcsState& next, const BcsState& prev, const VortexMove& move,
                  const BogoliubovBasis& basis_prev, const BogoliubovBasis& reference) {
  if (move.string_plaquettes.empty()) return overlap(next, prev);
  // Q|prev> as a state relative to the reference; its unknown global phase
  // enters the two factors as conjugates and cancels.
  const BcsState q = thouless(reference, parity_string_transform(basis_prev, move.string_plaquettes));
  return overlap(next, q) * overlap(q, prev);
}

GroundStateTable::GroundStateTable(const LatticeSpec& lat, const SectorSpec& sector,
                                   const DriveParams& params, const ExchangeOptions& opts)
    : lat_(lat), sector_(sector), params_(params), opts_(opts) {}

void GroundStateTable::set_reference(const VortexConfig& cfg) {
  GroundState g;
  g.basis = floquet_ground_basis(lat_, cfg, sector_, params_, opts_.floquet, &g.parity_corrected);
  g.state = thouless(g.basis, g.basis);
  reference_ = g.basis;
  has_reference_ = true;
  states_.clear();
  states_.emplace(cfg, std::move(g));
}

void GroundStateTable::ensure(const std::vector<VortexConfig>& cfgs) {
  if (cfgs.empty()) return;
  if (!has_reference_) set_reference(cfgs.front());
  std::vector<VortexConfig> todo;
  for (const auto& c : cfgs)
    if (!states_.count(c) && std::find(todo.begin(), todo.end(), c) == todo.end())
      todo.push_back(c);
  std::vector<GroundState> out(todo.size());
  parallel_for(static_cast<int>(todo.size()), opts_.threads, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = ground_state_for(lat_, todo[k], sector_, params_, reference_, opts_.floquet);
    } catch (const NumericalError& e) {
      std::string sites;
      for (int v : todo[k].occupied_vertices()) {
        const Site s = lat_.site(v);
        sites += " (" + std::to_string(s.x) + "," + std::to_string(s.y) + ")";
      }
      throw NumericalError("ground state for vortices at" + sites + ": " + e.what());
    }
  });
  for (std::size_t k = 0; k < todo.size(); ++k) states_.emplace(todo[k], std::move(out[k]));
}

const GroundState& GroundStateTable::at(const VortexConfig& cfg) const {
  auto it = states_.find(cfg);
  if (it == states_.end()) throw ConfigError("configuration not in the ground-state table");
  return it->second;
}

BerryResult berry_phase(const ExchangePath& path, GroundStateTable& table,
                        const ExchangeOptions& opts) {
  table.ensure(path.configs);
  BerryResult r;
  cplx prod(1.0);
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const GroundState& prev = table.at(path.configs[k]);
    const GroundState& next = table.at(path.configs[k + 1]);
    const cplx e = step_element(next.state, prev.state, path.steps[k], prev.basis, table.reference());
    if (!(std::abs(e) >= opts.min_element))
      throw NumericalError("degenerate path: |element| = " + std::to_string(std::abs(e)) +
                           " at step " + std::to_string(k) +
                           " (likely a Majorana level crossing)");
    r.elements.push_back(e);
    prod *= e / std::abs(e);
  }
  r.phase = path.steps.empty() ? 0.0 : wrap_phase(std::arg(prod));
  return r;
}

BerryResult berry_phase(const ExchangePath& path, Fusion sector, const DriveParams& params,
                        const LatticeSpec& lat, const ExchangeOptions& opts) {
  GroundStateTable table(lat, fusion_boundary(sector), params, opts);
  return berry_phase(path, table, opts);
}

ExchangeResult exchange_phase(Fusion sector, const DriveParams& params, const LatticeSpec& lat,
                              int arm_length, const ExchangeOptions& opts, Dir stem) {
  validate(params);
  auto [p, q] = build_levin_wen_paths(lat, default_junction_center(lat), arm_length, stem);
  GroundStateTable table(lat, fusion_boundary(sector), params, opts);
  std::vector<VortexConfig> all = p.configs;
  all.insert(all.end(), q.configs.begin(), q.configs.end());
  table.ensure(all);
  ExchangeResult r;
  r.sector = sector;
  r.L = lat.lx();
  r.arm_length = arm_length;
  r.params = params;
  r.theta_P = berry_phase(p, table, opts).phase;
  r.theta_Pprime = berry_phase(q, table, opts).phase;
  r.exchange_phase = wrap_phase(r.theta_P - r.theta_Pprime);
  return r;
}

}  // namespace fdtc
