#include "fdtc/spin_model.hpp"

#include <bit>

namespace fdtc {

namespace {

int wrap(int a, int n) { return ((a % n) + n) % n; }

void check_size(const LatticeSpec& lat) {
  if (lat.topology() != Topology::kTorus || lat.lx() != lat.ly())
    throw ConfigError("spin model needs a square torus");
  if (2 * lat.lx() * lat.ly() > kSpinOracleMaxSpins)
    throw ConfigError("spin model limited to " + std::to_string(kSpinOracleMaxSpins) + " spins");
}

PauliString x_on(int q) { return {1u << q, 0u, 1}; }
PauliString z_on(int q) { return {0u, 1u << q, 1}; }

int n_spins(const LatticeSpec& lat) { return 2 * lat.lx() * lat.ly(); }

}  // namespace

PauliString operator*(const PauliString& a, const PauliString& b) {
  const int swaps = std::popcount(a.z & b.x);
  return {a.x ^ b.x, a.z ^ b.z, a.sign * b.sign * (swaps % 2 ? -1 : 1)};
}

int horizontal_edge(const LatticeSpec& lat, int x, int y) {
  return 2 * (wrap(y, lat.ly()) * lat.lx() + wrap(x, lat.lx()));
}

int vertical_edge(const LatticeSpec& lat, int x, int y) { return horizontal_edge(lat, x, y) + 1; }

PauliString vertex_operator(const LatticeSpec& lat, int x, int y) {
  return x_on(horizontal_edge(lat, x, y)) * x_on(horizontal_edge(lat, x - 1, y)) *
         x_on(vertical_edge(lat, x, y)) * x_on(vertical_edge(lat, x, y - 1));
}

PauliString plaquette_operator(const LatticeSpec& lat, int x, int y) {
  return z_on(horizontal_edge(lat, x, y)) * z_on(horizontal_edge(lat, x, y + 1)) *
         z_on(vertical_edge(lat, x, y)) * z_on(vertical_edge(lat, x + 1, y));
}

PauliString drive_operator(const LatticeSpec& lat, int x, int y, Axis axis) {
  if (axis == Axis::kX) return x_on(vertical_edge(lat, x + 1, y)) * z_on(horizontal_edge(lat, x, y));
  return x_on(horizontal_edge(lat, x, y + 1)) * z_on(vertical_edge(lat, x, y));
}

PauliString boson_parity(const LatticeSpec& lat, int x, int y) {
  return vertex_operator(lat, x, y) * plaquette_operator(lat, x, y);
}

PauliString wilson_x(const LatticeSpec& lat, int row) {
  PauliString w{0u, 0u, -1};
  for (int x = 0; x < lat.lx(); ++x)
    w = w * x_on(vertical_edge(lat, x, row)) * z_on(horizontal_edge(lat, x, row + 1));
  return w;
}

PauliString wilson_y(const LatticeSpec& lat, int column) {
  PauliString w{0u, 0u, -1};
  for (int y = 0; y < lat.ly(); ++y)
    w = w * x_on(horizontal_edge(lat, column, y)) * z_on(vertical_edge(lat, column + 1, y));
  return w;
}

PauliString loop_x(const LatticeSpec& lat, int row) {
  PauliString w;
  for (int x = 0; x < lat.lx(); ++x) w = w * x_on(vertical_edge(lat, x, row));
  return w;
}

SpMat pauli_matrix(const PauliString& p, int n) {
  const std::uint32_t dim = 1u << n;
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const int sign = p.sign * (std::popcount(s & p.z) % 2 ? -1 : 1);
    t.emplace_back(static_cast<int>(s ^ p.x), static_cast<int>(s), cplx(sign));
  }
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat toric_code(const LatticeSpec& lat, const VortexConfig& cfg, double g) {
  check_size(lat);
  const int n = n_spins(lat);
  SpMat h(1 << n, 1 << n);
  for (int y = 0; y < lat.ly(); ++y)
    for (int x = 0; x < lat.lx(); ++x) {
      const double s = cfg.occupied(lat.index(x, y)) ? -1.0 : 1.0;
      h -= (0.5 * g * s) * pauli_matrix(vertex_operator(lat, x, y), n);
      h -= (0.5 * g) * pauli_matrix(plaquette_operator(lat, x, y), n);
    }
  return h;
}

FourierSeries spin_series(const LatticeSpec& lat, const VortexConfig& cfg, const DriveParams& p) {
  check_size(lat);
  validate(p);
  const int n = n_spins(lat);
  SpMat dx(1 << n, 1 << n), dy(1 << n, 1 << n);
  for (int y = 0; y < lat.ly(); ++y)
    for (int x = 0; x < lat.lx(); ++x) {
      dx += pauli_matrix(drive_operator(lat, x, y, Axis::kX), n);
      dy += pauli_matrix(drive_operator(lat, x, y, Axis::kY), n);
    }
  // d_r(t) = J + Delta (e^{i(wt + phi_r)} + c.c.)
  FourierSeries fs;
  fs.omega = p.omega;
  const cplx ex = p.Delta * std::polar(1.0, p.phi_x), ey = p.Delta * std::polar(1.0, p.phi_y);
  fs.terms.push_back({0, SpMat(toric_code(lat, cfg, p.g) - p.J * (dx + dy))});
  fs.terms.push_back({1, SpMat(-(ex * dx + ey * dy))});
  fs.terms.push_back({-1, SpMat(-(std::conj(ex) * dx + std::conj(ey) * dy))});
  return fs;
}

CMat spin_model(const LatticeSpec& lat, const VortexConfig& cfg, const DriveParams& p, double t) {
  return spin_series(lat, cfg, p).dense_at(t);
}

}  // namespace fdtc
