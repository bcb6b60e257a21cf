#pragma once

// Fermionic Gaussian states.
//
// A BogoliubovBasis stores the positive-branch eigenvectors (u_n; v_n) of a
// BdG matrix. The full transform is
//     W = [[u, v^*], [v, u^*]],   Psi = W (alpha; alpha^dag),
// so alpha = u^dag f + v^dag f^dag and the vacuum |Phi> obeys alpha|Phi> = 0.
// Covariances of that vacuum:
//     <f^dag f> = v v^dag   <f^dag f^dag> = v u^dag
//     <f f>     = u v^dag   <f f^dag>     = u u^dag
//
// A BcsState is a vacuum written relative to a reference vacuum |Phi_1> as
//     |Phi> = N exp(1/2 sum_ij T_ij a_i^dag a_j^dag) |Phi_1>,   N > 0,
// with a the reference quasiparticles; the phase is fixed by <Phi_1|Phi> > 0.

#include <set>
#include <string>
#include <vector>

#include "fdtc/model.hpp"
#include "fdtc/types.hpp"

namespace fdtc {

/// Complex number stored as phase * exp(log_abs); keeps Pfaffians and
/// normalisations of large systems away from under/overflow.
struct LogValue {
  cplx phase{1.0};
  double log_abs = 0.0;
  cplx value() const { return phase * std::exp(log_abs); }
  bool is_zero() const { return phase == cplx(0.0); }
};

/// Pfaffian of the antisymmetric part of `a` (Parlett-Reid LTL elimination
/// with partial pivoting). Throws ConfigError on odd or non-square input.
LogValue pfaffian_log(const CMat& a);
cplx pfaffian(const CMat& a);
double pfaffian(const RMat& a);

struct BogoliubovBasis {
  CMat u;
  CMat v;
  /// Ascending. After physical_ground flips the first column its energy is
  /// stored negated, so -1/2 sum(energies) stays the state's energy.
  RVec energies;
  /// +1 even, -1 odd (fermion parity of the vacuum).
  int parity = 1;
  /// True if the lowest |energy| fell below the parity gap tolerance.
  bool parity_indeterminate = false;
  std::string tag;

  int modes() const { return static_cast<int>(u.cols()); }
  /// First N columns (u; v) of W.
  CMat columns() const;
  CMat full() const;
  /// max of |u^dag u + v^dag v - I| and |u^T v + v^T u|.
  double unitarity_error() const;
  double ground_energy() const { return -0.5 * energies.sum(); }
};

struct BcsState {
  CMat thouless;
  /// log of N = |<Phi_1|Phi>|
  double log_norm = 0.0;
  double norm() const { return std::exp(log_norm); }
};

struct ParityResult {
  int parity = 1;
  bool indeterminate = false;
  double min_energy = 0.0;
  /// Sign from the direct Pfaffian, kept as a cross-check of the Schur route.
  int direct_parity = 1;
};

inline constexpr double kDefaultGapTol = 2e-8;  // 1e-8 mu_psi

/// Bogoliubov diagonalisation. Throws NumericalError if particle-hole
/// symmetry is violated beyond ph_tol.
BogoliubovBasis diagonalize(const QuadraticOperator& h,
                            double gap_tol = kDefaultGapTol,
                            double ph_tol = 1e-8);

/// Real antisymmetric A with H = (i/4) sum_ab A_ab c_a c_b, Majoranas ordered
/// (g_1, g'_1, g_2, g'_2, ...) with g = f + f^dag, g' = -i (f - f^dag).
RMat majorana_matrix(const CMat& m);

/// Ground-state parity of H = 1/2 Psi^dag M Psi from sign Pf(A) computed as
/// det(Z) Pf(T) with A = Z T Z^T the real Schur form.
ParityResult ground_parity(const QuadraticOperator& h,
                           double gap_tol = kDefaultGapTol);

/// Parity of the vacuum of `basis` (ground parity of sum_n alpha_n^dag alpha_n).
int vacuum_parity(const BogoliubovBasis& basis);

/// If the parity differs, occupy the lowest quasiparticle:
/// (u_1, v_1) -> (v_1^*, u_1^*).
BogoliubovBasis physical_ground(const BogoliubovBasis& basis,
                                int required_parity);

/// Threshold on 1/cond(u~) below which the Thouless matrix is refused.
inline constexpr double kThoulessRcond = 1e-12;

BcsState thouless(const BogoliubovBasis& reference,
                  const BogoliubovBasis& target);

/// <Phi_i|Phi_j> for states sharing a reference.
LogValue overlap_log(const BcsState& bra, const BcsState& ket);
cplx overlap(const BcsState& bra, const BcsState& ket);

/// Rows of u and v sign-flipped on the listed plaquettes (f_p -> -f_p).
BogoliubovBasis parity_string_transform(const BogoliubovBasis& basis,
                                        const std::vector<int>& plaquettes);

/// W -> U W. Throws NumericalError if U is not unitary to 1e-8.
BogoliubovBasis evolve(const BogoliubovBasis& basis, const CMat& u);

/// <Phi| 1/2 Psi^dag M Psi |Phi> = -1/2 tr(W_1^dag M W_1).
double expectation(const QuadraticOperator& h, const BogoliubovBasis& basis);
double expectation(const CMat& m, const BogoliubovBasis& basis);

/// Rescale columns so the first component above 1e-8 of the column norm is
/// real positive.
void fix_column_phases(CMat& top, CMat& bottom);

}  // namespace fdtc
