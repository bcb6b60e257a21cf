#pragma once

// Driven fermion model in Bogoliubov-de Gennes (BdG) form.
//
// A quadratic Hamiltonian is stored as H = 1/2 Psi^dag M Psi with
// Psi = (f_1..f_N, f_1^dag..f_N^dag) and
//     M = [[A, B], [C, -A^T]],
// A Hermitian (f^dag f), B = -B^T (f^dag f^dag), C = -C^T = -B^* (f f).
// Particle-hole symmetry reads Sigma_x M^* Sigma_x = -M.
//
// Units: g = 1, so mu_psi = 2.

#include <utility>
#include <vector>

#include "fdtc/lattice.hpp"
#include "fdtc/types.hpp"

namespace fdtc {

struct DriveParams {
  double g = 1.0;
  double J = 0.0;
  double Delta = 0.0;
  double omega = 4.0;
  double phi_x = 0.0;
  double phi_y = kPi / 2;
  double t0 = 0.0;

  double mu_psi() const { return 2.0 * g; }
  double period() const { return 2.0 * kPi / omega; }
  /// d_r(t) = J + 2 Delta cos(omega t + phi_r)
  double d(Axis axis, double t) const;
};

struct EffectiveParams {
  double mu = 0.0;
  double J = 0.0;
  double Delta = 0.0;
  double phi_x = 0.0;
  double phi_y = kPi / 2;
};

enum class Frame { kLab, kRotated };

/// omega/2 - mu_psi
double effective_mu(double omega, double mu_psi);
EffectiveParams effective_params(const DriveParams& p);

/// Throws ConfigError on non-finite or out-of-range parameters.
void validate(const DriveParams& p);

class QuadraticOperator {
 public:
  QuadraticOperator() = default;
  explicit QuadraticOperator(CMat m);

  const CMat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  int modes() const { return dim() / 2; }

  /// max |M - M^dag| / max(1, max|M|)
  double hermiticity_error() const;
  /// max |Sigma_x M^* Sigma_x + M| / max(1, max|M|)
  double particle_hole_error() const;

 private:
  CMat m_;
};

/// Sigma_x M^* Sigma_x
CMat particle_hole_conjugate(const CMat& m);

/// Coefficients of one bond type, multiplied by the bond sign s. For the bond
/// p -> q:
///   hop_fwd  * f_p^dag f_q     hop_bwd * f_q^dag f_p
///   pair_cc  * f_q^dag f_p^dag pair_aa * f_p f_q
/// Hermiticity of the total operator is the caller's business (Fourier
/// components are not Hermitian on their own).
struct BondCoefficients {
  cplx hop_fwd{0.0};
  cplx hop_bwd{0.0};
  cplx pair_cc{0.0};
  cplx pair_aa{0.0};
};

/// Sparse 2N x 2N matrix with uniform `onsite` and the given per-axis bond
/// coefficients, bond signs from bond_coupling_sign.
SpMat assemble_bdg(const LatticeSpec& lat, const VortexConfig& cfg,
                   const SectorSpec& sector, cplx onsite,
                   const BondCoefficients& x, const BondCoefficients& y,
                   StringConvention conv = StringConvention::kStandard);

/// M(t) = sum_m e^{i m omega t} M_m.
struct FourierSeries {
  double omega = 0.0;
  std::vector<std::pair<int, SpMat>> terms;

  int dim() const;
  SpMat at(double t) const;
  CMat dense_at(double t) const;
  /// The m-th component (zero if absent).
  SpMat component(int m) const;
};

FourierSeries drive_series(const LatticeSpec& lat, const VortexConfig& cfg,
                           const SectorSpec& sector, const DriveParams& params,
                           Frame frame,
                           StringConvention conv = StringConvention::kStandard);

/// Single m = 0 term holding the time-averaged matrix.
FourierSeries averaged_series(const LatticeSpec& lat, const VortexConfig& cfg,
                              const SectorSpec& sector,
                              const EffectiveParams& eff);

/// Lab-frame instantaneous BdG matrix.
QuadraticOperator bdg_drive(const LatticeSpec& lat, const VortexConfig& cfg,
                            const SectorSpec& sector, const DriveParams& params,
                            double t);

/// Rotating-frame BdG matrix R^dag M R - (omega/2) Sigma_z, with
/// R(t) = diag(e^{-i omega t/2}, e^{+i omega t/2}).
QuadraticOperator bdg_rotated(const LatticeSpec& lat, const VortexConfig& cfg,
                              const SectorSpec& sector,
                              const DriveParams& params, double t);

QuadraticOperator bdg_averaged(const LatticeSpec& lat, const VortexConfig& cfg,
                               const SectorSpec& sector,
                               const EffectiveParams& eff);

/// m-th Fourier matrix of bdg_rotated; zero for |m| > 2. Only m = 0 is
/// Hermitian, so the plain matrix is returned.
CMat fourier_component(const LatticeSpec& lat, const VortexConfig& cfg,
                       const SectorSpec& sector, const DriveParams& params,
                       int m);

/// Leading-order kick operator
///   K(t,t0) = -sum_{m != 0} (e^{i m w t} - e^{i m w t0}) H'_m / (m w).
CMat kick_operator(const LatticeSpec& lat, const VortexConfig& cfg,
                   const SectorSpec& sector, const DriveParams& params,
                   double t, double t0);

/// Frame rotation R(t) in BdG space: diag(e^{-i w t/2} I, e^{+i w t/2} I).
CMat frame_rotation(int n_modes, double omega, double t);

}  // namespace fdtc
