#pragma once

// Observables: sector ground energies, edge spectra, Majorana scans, Chern
// numbers and heating measures.

#include <optional>
#include <string>
#include <vector>

#include "fdtc/bcs.hpp"
#include "fdtc/bloch.hpp"
#include "fdtc/floquet.hpp"
#include "fdtc/lattice.hpp"
#include "fdtc/model.hpp"

namespace fdtc {

// ---------------------------------------------------------------- sectors

struct SectorEnergy {
  SectorSpec sector;
  /// -1/2 sum of the positive quasienergies
  double bdg_energy = 0.0;
  /// fermion parity of the BdG ground state, +1 even
  int bdg_parity = 1;
  /// energy of the lowest even-parity state: bdg_energy, plus the smallest
  /// positive quasienergy when the BdG ground state is odd
  double physical_energy = 0.0;
  double lowest_excitation = 0.0;
};

struct DegeneracyReport {
  int L = 0;
  std::vector<SectorEnergy> sectors;  // all_sectors() order
  int odd_sectors = 0;
  /// max - min of bdg_energy over the even-parity sectors
  double splitting = 0.0;
  bool momentum_route = false;
};

enum class EnergyRoute { kAuto, kRealSpace, kMomentum };

/// Floquet-BdG ground energies of the four boundary sectors. The momentum
/// route (vortex-free configurations only) propagates 2x2 Bloch blocks; its
/// parity is the product over time-reversal-invariant momenta.
DegeneracyReport sector_ground_energies(const LatticeSpec& lat, const DriveParams& params,
                                        const VortexConfig& cfg, const FloquetOptions& opts = {},
                                        EnergyRoute route = EnergyRoute::kAuto);

// ---------------------------------------------------------------- edges

struct EdgeMode {
  double quasienergy = 0.0;
  double edge_weight = 0.0;
  double momentum = 0.0;
};

struct EdgeSpectrum {
  std::vector<EdgeMode> modes;
  /// smallest |eps| and smallest pi/T - |eps| of the bulk torus spectrum
  double bulk_gap_zero = 0.0;
  double bulk_gap_pi = 0.0;
  /// max over momenta of the number of in-gap modes with edge_weight > 0.8,
  /// around zero and around pi/T
  int zero_branches = 0;
  int pi_branches = 0;
  /// in-gap edge modes found on both sides of zero (resp. pi/T)
  bool zero_traversing = false;
  bool pi_traversing = false;
};

inline constexpr double kEdgeWeightThreshold = 0.8;
inline constexpr double kInGapFraction = 0.9;

/// Cylinder open along x, periodic along y (sector wy). Edge weight is the
/// mode weight on the two outermost columns at each end; a mode is in-gap if
/// it lies closer to 0 (pi/T) than kInGapFraction times the bulk gap.
EdgeSpectrum edge_spectrum(const LatticeSpec& lat, const DriveParams& params, int wy = 1,
                           const FloquetOptions& opts = {});

// ---------------------------------------------------------------- scans

struct MajoranaRow {
  SweepRow row;
  bool zero_mode = false;
  bool pi_mode = false;
};

inline constexpr double kMajoranaFlagFraction = 0.05;

/// quasienergy_sweep plus flags min|eps| < 0.05 gap and
/// min|eps - pi/T| < 0.05 gap.
std::vector<MajoranaRow> majorana_scan(const std::vector<DriveParams>& grid,
                                       const LatticeSpec& lat, const VortexConfig& cfg,
                                       const SectorSpec& sector, const FloquetOptions& opts = {},
                                       int threads = 1);

// ---------------------------------------------------------------- Chern

/// Chern number of the lower band of the averaged Bloch BdG matrix on a
/// k_grid x k_grid mesh (plaquette products of normalised link variables),
/// C = (1/2 pi) sum arg(U_x U_y U_x^* U_y^*) with U = <u(k)|u(k + dk)>.
/// Throws NumericalError if the gap closes on the mesh.
int chern_number(const EffectiveParams& eff, int k_grid);

// ---------------------------------------------------------------- heating

struct HeatingReport {
  std::vector<std::pair<int, double>> q_series;
  double q_bar = 0.0;
  DriveParams params;
  std::string cfg_descriptor;
  double E0 = 0.0;
  double E_inf = 0.0;
};

/// Energies are expectation values of 1/2 Psi^dag M_avg Psi; its Fock-space
/// trace vanishes, so E_inf = 0 in this convention.
double infinite_temperature_energy(const QuadraticOperator& h);

/// Q(nT) for n = 0..n_max, recording every `stride`-th period. The initial
/// state is the even-parity ground state of the averaged model; evolution is
/// by the rotated-frame one-period propagator.
HeatingReport heating_q(int n_max, const LatticeSpec& lat, const DriveParams& params,
                        const VortexConfig& cfg, const SectorSpec& sector,
                        const FloquetOptions& opts = {}, int stride = 1);

/// Q-bar from the averaged matrix projected onto the Floquet eigenbasis
/// (blocks of degenerate quasienergies kept whole).
double heating_qbar(const LatticeSpec& lat, const DriveParams& params, const VortexConfig& cfg,
                    const SectorSpec& sector, const FloquetOptions& opts = {});

/// Same from an already computed Floquet result.
double heating_qbar(const FloquetResult& fr, const QuadraticOperator& h_avg);

/// Diagonal part of m in the eigenbasis `modes` with quasienergies `eps`;
/// modes whose quasienergies agree within `tol` form one block.
CMat project_diagonal(const CMat& m, const CMat& modes, const RVec& eps, double tol);

}  // namespace fdtc
