#pragma once

// Momentum-space blocks of translation-invariant (vortex-free) models.
//
// With Psi_r = N^{-1/2} sum_k e^{ik.r} Psi_k for both Nambu components,
// Psi_k = (f_k, f_{-k}^dag), the BdG matrix becomes
//     M(k) = sum_d M(0 -> d) e^{ik.d},
// the same rule for every block. The couplings M(0 -> d) are read off a
// small periodic reference lattice built by the real-space code, so the
// blocks inherit all of its conventions. Boundary sectors enter only through
// the allowed momenta, e^{i k L} = w.

#include <vector>

#include "fdtc/floquet.hpp"
#include "fdtc/model.hpp"
#include "fdtc/types.hpp"

namespace fdtc {

/// M(t) = sum_m e^{i m omega t} M_m with dense blocks.
struct DenseSeries {
  double omega = 0.0;
  std::vector<std::pair<int, CMat>> terms;
  CMat at(double t) const;
  int dim() const;
};

class BlochModel {
 public:
  /// 2x2 blocks M(kx, ky) on the torus.
  static BlochModel torus(const DriveParams& p, Frame frame);
  static BlochModel torus_averaged(const EffectiveParams& eff);
  /// 2lx x 2lx blocks M(ky) of a cylinder open along x.
  static BlochModel cylinder(int lx, const DriveParams& p, Frame frame);
  static BlochModel cylinder_averaged(int lx, const EffectiveParams& eff);

  /// kx is ignored for cylinder blocks.
  DenseSeries block(double kx, double ky) const;
  int block_dim() const { return 2 * cell_; }
  bool is_cylinder() const { return cylinder_; }

 private:
  struct Hop {
    int dx = 0, dy = 0, m = 0;
    CMat mat;
  };
  static BlochModel extract(const LatticeSpec& ref, const FourierSeries& fs, bool cylinder);

  bool cylinder_ = false;
  int cell_ = 1;
  double omega_ = 0.0;
  std::vector<Hop> hops_;
};

/// k = (2 pi n + (w < 0 ? pi : 0)) / L, n = 0..L-1.
std::vector<double> allowed_momenta(int L, int w);

/// Quasienergies eps = lambda/T of one block, ascending.
RVec block_quasienergies(const DenseSeries& block, double period, double t0,
                         const PropagationOptions& opts);

struct BlockFloquet {
  RVec quasienergies;  // ascending
  CMat modes;
};
BlockFloquet block_floquet(const DenseSeries& block, double period, double t0,
                           const PropagationOptions& opts);

}  // namespace fdtc
