#pragma once

// Dense Jordan-Wigner Fock space for a handful of modes. Independent of the
// library's Gaussian-state algebra; used as the reference for it.

#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fdtc/bcs.hpp"

namespace fock {

using fdtc::CMat;
using fdtc::CVec;
using fdtc::cplx;

struct Space {
  int n = 0;
  std::vector<CMat> f;  // annihilators

  explicit Space(int modes) : n(modes) {
    const int dim = 1 << n;
    for (int j = 0; j < n; ++j) {
      CMat a = CMat::Zero(dim, dim);
      for (int s = 0; s < dim; ++s) {
        if (!(s >> j & 1)) continue;
        int sign = 1;
        for (int k = 0; k < j; ++k)
          if (s >> k & 1) sign = -sign;
        a(s ^ (1 << j), s) = sign;
      }
      f.push_back(a);
    }
  }

  int dim() const { return 1 << n; }

  /// Psi_a: a < n -> f_a, else f_{a-n}^dag
  CMat psi(int a) const { return a < n ? f[a] : CMat(f[a - n].adjoint()); }

  /// 1/2 Psi^dag M Psi
  CMat quadratic(const CMat& m) const {
    CMat h = CMat::Zero(dim(), dim());
    for (int a = 0; a < 2 * n; ++a)
      for (int b = 0; b < 2 * n; ++b)
        if (m(a, b) != 0.0) h += 0.5 * m(a, b) * psi(a).adjoint() * psi(b);
    return h;
  }

  CMat parity() const {
    CMat p = CMat::Identity(dim(), dim());
    for (int j = 0; j < n; ++j)
      p = p * (CMat::Identity(dim(), dim()) - 2.0 * f[j].adjoint() * f[j]);
    return p;
  }

  /// alpha_k = sum_i conj(u_ik) f_i + conj(v_ik) f_i^dag
  CMat quasiparticle(const fdtc::BogoliubovBasis& b, int k) const {
    CMat a = CMat::Zero(dim(), dim());
    for (int i = 0; i < n; ++i) {
      a += std::conj(b.u(i, k)) * f[i];
      a += std::conj(b.v(i, k)) * CMat(f[i].adjoint());
    }
    return a;
  }

  /// Normalised state annihilated by every quasiparticle of `b`.
  CVec vacuum(const fdtc::BogoliubovBasis& b) const {
    CMat num = CMat::Zero(dim(), dim());
    for (int k = 0; k < n; ++k) {
      CMat a = quasiparticle(b, k);
      num += a.adjoint() * a;
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(num);
    return es.eigenvectors().col(0);
  }

  /// Projector onto the string-parity operator prod_{p in set}(1 - 2 n_p).
  CMat string_operator(const std::vector<int>& plaquettes) const {
    CMat q = CMat::Identity(dim(), dim());
    for (int p : plaquettes)
      q = q * (CMat::Identity(dim(), dim()) - 2.0 * f[p].adjoint() * f[p]);
    return q;
  }
};

/// Random BdG matrix with the particle-hole structure.
inline CMat random_bdg(int n, std::mt19937_64& rng, double pairing = 1.0) {
  std::normal_distribution<double> g;
  auto rnd = [&](int r, int c) {
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
  };
  CMat a = rnd(n, n);
  a = (a + a.adjoint()).eval() / 2.0;
  CMat b = rnd(n, n) * pairing;
  b = (b - b.transpose()).eval() / 2.0;
  CMat m(2 * n, 2 * n);
  m << a, b, -b.conjugate(), -a.conjugate();
  return m;
}

inline CMat random_skew(int n, std::mt19937_64& rng, bool real) {
  std::normal_distribution<double> g;
  CMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), real ? 0.0 : g(rng));
  return a - a.transpose();
}

inline fdtc::BogoliubovBasis random_basis(int n, std::mt19937_64& rng, int parity) {
  auto b = fdtc::diagonalize(fdtc::QuadraticOperator(random_bdg(n, rng)));
  return fdtc::physical_ground(b, parity);
}

/// Fock vacuum of `b` with phase fixed by <ref|phi> > 0.
inline CVec gauged_vacuum(const Space& fs, const fdtc::BogoliubovBasis& b, const CVec& ref) {
  CVec phi = fs.vacuum(b);
  cplx o = ref.dot(phi);
  return phi * (std::conj(o) / std::abs(o));
}

}  // namespace fock
