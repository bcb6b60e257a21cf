#pragma once

// Many-body spin Hamiltonian of the driven toric code on a 2x2 torus
// (8 spins, 256 states), used only as an oracle for the fermion model.
//
// Edge labels on an L x L torus:
//   h(x, y) = 2 (y L + x)      horizontal edge from vertex (x, y) to (x+1, y)
//   e(x, y) = 2 (y L + x) + 1  vertical edge from vertex (x, y) to (x, y+1)
// so plaquette (x, y) has bottom h(x, y), top h(x, y+1), left e(x, y) and
// right e(x+1, y). Qubit q is bit q of the basis index.

#include <cstdint>
#include <vector>

#include "fdtc/lattice.hpp"
#include "fdtc/model.hpp"

namespace fdtc {

inline constexpr int kSpinOracleMaxSpins = 12;

/// sign * X^xmask Z^zmask (Z applied first).
struct PauliString {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  int sign = 1;
};

PauliString operator*(const PauliString& a, const PauliString& b);

int horizontal_edge(const LatticeSpec& lat, int x, int y);
int vertical_edge(const LatticeSpec& lat, int x, int y);

/// Product of X on the four edges at vertex (x, y).
PauliString vertex_operator(const LatticeSpec& lat, int x, int y);
/// Product of Z on the four edges of plaquette (x, y).
PauliString plaquette_operator(const LatticeSpec& lat, int x, int y);
/// X_{p,R} Z_{p,B} and X_{p,T} Z_{p,L} of plaquette (x, y).
PauliString drive_operator(const LatticeSpec& lat, int x, int y, Axis axis);
/// A_v B_{p(v)}: e-boson parity of vertex (x, y).
PauliString boson_parity(const LatticeSpec& lat, int x, int y);
/// -prod_{p in row y} X_{p,L} Z_{p,T} and -prod_{p in column x} X_{p,B} Z_{p,R}.
PauliString wilson_x(const LatticeSpec& lat, int row);
PauliString wilson_y(const LatticeSpec& lat, int column);
/// prod X over the vertical edges crossing a horizontal line (noncontractible).
PauliString loop_x(const LatticeSpec& lat, int row);

SpMat pauli_matrix(const PauliString& p, int n_spins);

/// Toric code with A_v -> -A_v at occupied vertices, so that `cfg` is the
/// boson content of the ground state:
///   H_tc = -g/2 sum_v s_v A_v - g/2 sum_p B_p.
SpMat toric_code(const LatticeSpec& lat, const VortexConfig& cfg, double g);

/// H_tc + H_d(t), H_d = -sum_p [d_x(t) X_{p,R} Z_{p,B} + d_y(t) X_{p,T} Z_{p,L}].
/// Throws ConfigError unless lat is a torus with 2 L^2 <= 12 spins.
CMat spin_model(const LatticeSpec& lat, const VortexConfig& cfg, const DriveParams& p, double t);

/// The same as a Fourier series in omega (components m = -1, 0, 1).
FourierSeries spin_series(const LatticeSpec& lat, const VortexConfig& cfg, const DriveParams& p);

}  // namespace fdtc
