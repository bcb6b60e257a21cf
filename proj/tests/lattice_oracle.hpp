#pragma once

// Test-side geometry: explicit string sets and a crossing-parity count of the
// vortices enclosed by unwrapped closed walks.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "fdtc/lattice.hpp"

namespace oracle {

using namespace fdtc;

/// Vertices whose occupation enters the sign of bond b.
inline std::set<int> string_set(const LatticeSpec& lat, const Bond& b) {
  std::set<int> out;
  Site s = lat.site(b.from);
  if (b.axis == Axis::kY) {
    for (int x = s.x + 1; x < lat.lx(); ++x) out.insert(lat.index(x, (s.y + 1) % lat.ly()));
  } else if (b.wrapped) {
    for (int y = s.y + 1; y < lat.ly(); ++y)
      for (int x = 0; x < lat.lx(); ++x) out.insert(lat.index(x, y));
  }
  return out;
}

/// p -> p+x -> p+x+y -> p+y -> p, bonds named explicitly (valid for L = 2).
inline int elementary_flux(const LatticeSpec& lat, const VortexConfig& cfg,
                           const SectorSpec& sector, int p) {
  const int px = lat.neighbor(p, Dir::kPlusX)->index;
  const int py = lat.neighbor(p, Dir::kPlusY)->index;
  return bond_coupling_sign(lat, cfg, sector, p, Axis::kX) *
         bond_coupling_sign(lat, cfg, sector, px, Axis::kY) *
         bond_coupling_sign(lat, cfg, sector, py, Axis::kX) *
         bond_coupling_sign(lat, cfg, sector, p, Axis::kY);
}

using Step = std::pair<int, int>;

/// Random walk of n unit steps followed by a return leg; closes in Z^2.
inline std::vector<Step> random_closed_walk(std::mt19937_64& rng, int n) {
  static const Step dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  std::uniform_int_distribution<int> pick(0, 3);
  std::vector<Step> w;
  int x = 0, y = 0;
  for (int i = 0; i < n; ++i) {
    Step s = dirs[pick(rng)];
    w.push_back(s);
    x += s.first;
    y += s.second;
  }
  for (; x != 0; x += x > 0 ? -1 : 1) w.push_back({x > 0 ? -1 : 1, 0});
  for (; y != 0; y += y > 0 ? -1 : 1) w.push_back({0, y > 0 ? -1 : 1});
  return w;
}

inline int wrap(int a, int l) { return ((a % l) + l) % l; }

/// Plaquettes visited (the final return to the start is implicit).
inline std::vector<int> walk_plaquettes(const LatticeSpec& lat, const std::vector<Step>& w,
                                        Site start) {
  std::vector<int> out;
  int x = start.x, y = start.y;
  for (std::size_t i = 0; i + 1 <= w.size(); ++i) {
    out.push_back(lat.index(wrap(x, lat.lx()), wrap(y, lat.ly())));
    x += w[i].first;
    y += w[i].second;
  }
  return out;
}

/// Product of (-1)^{n_v} over lattice vertices with odd winding, counting
/// crossings of a +x ray from each vertex.
inline int crossing_flux(const LatticeSpec& lat, const VortexConfig& cfg,
                         const std::vector<Step>& w, Site start) {
  int x = start.x, y = start.y;
  int xmin = x, xmax = x;
  std::map<std::pair<int, int>, int> crossings;  // (cx, Y) of vertical segments
  for (const Step& s : w) {
    if (s.second != 0) {
      // centre (x + 1/2, y + 1/2) to (x + 1/2, y + 1/2 + dy) crosses height Y
      const int yc = s.second > 0 ? y + 1 : y;
      crossings[{x, yc}] ^= 1;
    }
    x += s.first;
    y += s.second;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  int flux = 1;
  std::set<std::pair<int, int>> rows;
  for (auto& [k, v] : crossings) rows.insert({k.second, 0});
  for (auto& [yc, unused] : rows) {
    for (int vx = xmin - 1; vx <= xmax + 1; ++vx) {
      int parity = 0;
      for (auto& [k, v] : crossings)
        if (k.second == yc && k.first >= vx) parity ^= v;
      if (parity && cfg.occupied(lat.index(wrap(vx, lat.lx()), wrap(yc, lat.ly()))))
        flux = -flux;
    }
  }
  return flux;
}

}  // namespace oracle
