#pragma once

// Cross-check of the fermion model against the full spin dynamics on a 2x2
// torus. For every even boson configuration and every Wilson-loop sector the
// many-body Floquet eigenphases of the spin model are compared with the
// even-parity sums -T sum_n eps_n (n_n - 1/2) built from the lab-frame
// Floquet-BdG quasienergies of the matching fermion sector.

#include <vector>

#include "fdtc/floquet.hpp"
#include "fdtc/spin_model.hpp"

namespace fdtc {

struct SpinSectorMatch {
  VortexConfig cfg;
  int wilson_x = 1;
  int wilson_y = 1;
  SectorSpec fermion_sector;
  /// The single-particle propagator fixes the many-body one only up to sign.
  bool pi_shift = false;
  /// max eigenphase distance / T
  double mismatch = 0.0;
};

struct SpinOracleReport {
  std::vector<SpinSectorMatch> sectors;
  double max_mismatch = 0.0;
  /// max_mismatch / mu_psi
  double relative_mismatch = 0.0;
  /// largest |U V - V (V^dag U V)| over the sector subspaces
  double leakage = 0.0;
};

/// Throws NumericalError if a sector subspace does not have the expected
/// dimension or the propagator leaks out of it.
SpinOracleReport spin_oracle(const DriveParams& params, double t0, int n_steps,
                             StringConvention conv = StringConvention::kStandard);

/// Smallest max |a_i - b_pi(i) - shift| (mod 2 pi) over cyclic assignments of
/// the sorted phases; a and b must have equal size.
double circular_mismatch(std::vector<double> a, std::vector<double> b, double shift);

}  // namespace fdtc
