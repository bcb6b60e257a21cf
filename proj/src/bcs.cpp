#include "fdtc/bcs.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace fdtc {

namespace {

template <typename Mat>
LogValue pfaffian_impl(const Mat& in) {
  using Scalar = typename Mat::Scalar;
  if (in.rows() != in.cols()) throw ConfigError("pfaffian needs a square matrix");
  const Eigen::Index n = in.rows();
  if (n % 2 != 0) throw ConfigError("pfaffian needs an even dimension");
  Mat a = (in - in.transpose()) / Scalar(2.0);
  LogValue out;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      out.phase = -out.phase;
    }
    const Scalar piv = a(k, k + 1);
    const double mag = std::abs(piv);
    if (mag == 0.0) return {cplx(0.0), -std::numeric_limits<double>::infinity()};
    out.phase *= cplx(piv) / mag;
    out.log_abs += std::log(mag);
    const Eigen::Index m = n - k - 2;
    if (m > 0) {
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tau =
          a.row(k).tail(m).transpose() / piv;
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col = a.col(k + 1).tail(m);
      a.bottomRightCorner(m, m).noalias() += tau * col.transpose();
      a.bottomRightCorner(m, m).noalias() -= col * tau.transpose();
    }
  }
  return out;
}

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

LogValue pfaffian_log(const CMat& a) { return pfaffian_impl(a); }

cplx pfaffian(const CMat& a) { return pfaffian_log(a).value(); }

double pfaffian(const RMat& a) {
  LogValue lv = pfaffian_impl(a);
  return lv.value().real();
}

CMat BogoliubovBasis::columns() const {
  CMat w(2 * u.rows(), u.cols());
  w << u, v;
  return w;
}

CMat BogoliubovBasis::full() const {
  const Eigen::Index n = u.rows();
  CMat w(2 * n, 2 * n);
  w << u, v.conjugate(), v, u.conjugate();
  return w;
}

double BogoliubovBasis::unitarity_error() const {
  const CMat id = CMat::Identity(u.cols(), u.cols());
  const double e1 = max_abs(u.adjoint() * u + v.adjoint() * v - id);
  const double e2 = max_abs(u.transpose() * v + v.transpose() * u);
  return std::max(e1, e2);
}

void fix_column_phases(CMat& top, CMat& bottom) {
  for (Eigen::Index j = 0; j < top.cols(); ++j) {
    const double peak =
        std::max(top.col(j).cwiseAbs().maxCoeff(), bottom.col(j).cwiseAbs().maxCoeff());
    cplx lead{0.0};
    for (Eigen::Index i = 0; i < top.rows() && lead == 0.0; ++i)
      if (std::abs(top(i, j)) > 1e-6 * peak) lead = top(i, j);
    for (Eigen::Index i = 0; i < bottom.rows() && lead == 0.0; ++i)
      if (std::abs(bottom(i, j)) > 1e-6 * peak) lead = bottom(i, j);
    if (lead == 0.0) continue;
    const cplx ph = std::conj(lead) / std::abs(lead);
    top.col(j) *= ph;
    bottom.col(j) *= ph;
  }
}

BogoliubovBasis diagonalize(const QuadraticOperator& h, double gap_tol,
                            double ph_tol) {
  if (h.particle_hole_error() > ph_tol)
    throw NumericalError("BdG matrix violates particle-hole symmetry");
  if (h.hermiticity_error() > ph_tol)
    throw NumericalError("BdG matrix is not Hermitian");
  const Eigen::Index n = h.modes();
  const CMat m = (h.matrix() + h.matrix().adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const RVec& e = es.eigenvalues();
  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
  const double zero_tol = 1e-11 * scale;

  std::vector<Eigen::Index> pos;
  std::vector<Eigen::Index> zero;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (e(i) > zero_tol) pos.push_back(i);
    else if (e(i) >= -zero_tol) zero.push_back(i);
  }
  if (2 * (n - static_cast<Eigen::Index>(pos.size())) !=
      static_cast<Eigen::Index>(zero.size()))
    throw NumericalError("BdG spectrum is not particle-hole paired");

  CMat x(2 * n, n);
  RVec energies(n);
  Eigen::Index col = 0;
  if (!zero.empty()) {
    // Split the null space by the sign of Sigma_z, which anticommutes with
    // the particle-hole map and therefore separates partners.
    CMat z(2 * n, static_cast<Eigen::Index>(zero.size()));
    for (std::size_t i = 0; i < zero.size(); ++i)
      z.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(zero[i]);
    CMat sz = z;
    sz.bottomRows(n) *= -1.0;
    Eigen::SelfAdjointEigenSolver<CMat> zs(z.adjoint() * sz);
    const Eigen::Index k = z.cols() / 2;
    const CMat picked = z * zs.eigenvectors().rightCols(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      x.col(col) = picked.col(j);
      energies(col) = 0.0;
      ++col;
    }
  }
  for (Eigen::Index i : pos) {
    x.col(col) = es.eigenvectors().col(i);
    energies(col) = e(i);
    ++col;
  }

  BogoliubovBasis b;
  b.u = x.topRows(n);
  b.v = x.bottomRows(n);
  fix_column_phases(b.u, b.v);
  b.energies = energies;
  b.parity = vacuum_parity(b);
  b.parity_indeterminate = n > 0 && energies(0) < gap_tol;
  return b;
}

RMat majorana_matrix(const CMat& m) {
  const Eigen::Index n = m.rows() / 2;
  const CMat id = CMat::Identity(n, n);
  CMat omega(2 * n, 2 * n);
  omega << id, kI * id, id, -kI * id;
  omega *= 0.5;
  const CMat x = omega.adjoint() * m * omega;
  const RMat blk = (-kI * (x - x.transpose())).real();
  RMat a(2 * n, 2 * n);
  for (Eigen::Index s = 0; s < 2; ++s)
    for (Eigen::Index t = 0; t < 2; ++t)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
          a(2 * i + s, 2 * j + t) = blk(s * n + i, t * n + j);
  return a;
}

ParityResult ground_parity(const QuadraticOperator& h, double gap_tol) {
  ParityResult r;
  Eigen::SelfAdjointEigenSolver<CMat> es((h.matrix() + h.matrix().adjoint()) / 2.0,
                                         Eigen::EigenvaluesOnly);
  r.min_energy = es.eigenvalues().cwiseAbs().minCoeff();
  r.indeterminate = r.min_energy < gap_tol;

  const RMat a = majorana_matrix(h.matrix());
  Eigen::RealSchur<RMat> schur(a);
  if (schur.info() != Eigen::Success) throw NumericalError("real Schur failed");
  const double det_z = schur.matrixU().determinant();
  const double pf_t = pfaffian(RMat(schur.matrixT()));
  const double via_schur = (det_z < 0 ? -1.0 : 1.0) * pf_t;
  const double direct = pfaffian(a);
  r.parity = via_schur < 0 ? -1 : 1;
  r.direct_parity = direct < 0 ? -1 : 1;
  if (via_schur == 0.0) r.indeterminate = true;
  return r;
}

int vacuum_parity(const BogoliubovBasis& basis) {
  const CMat w1 = basis.columns();
  const CMat mb = 2.0 * w1 * w1.adjoint() - CMat::Identity(w1.rows(), w1.rows());
  LogValue pf = pfaffian_impl(majorana_matrix(mb));
  return pf.value().real() < 0 ? -1 : 1;
}

BogoliubovBasis physical_ground(const BogoliubovBasis& basis,
                                int required_parity) {
  if (basis.parity == required_parity || basis.modes() == 0) return basis;
  BogoliubovBasis out = basis;
  out.u.col(0) = basis.v.col(0).conjugate();
  out.v.col(0) = basis.u.col(0).conjugate();
  out.energies(0) = -basis.energies(0);
  out.parity = -basis.parity;
  return out;
}

BcsState thouless(const BogoliubovBasis& ref, const BogoliubovBasis& tgt) {
  if (ref.u.rows() != tgt.u.rows())
    throw ConfigError("thouless: dimension mismatch");
  const CMat ut = ref.u.adjoint() * tgt.u + ref.v.adjoint() * tgt.v;
  const CMat vt = ref.v.transpose() * tgt.u + ref.u.transpose() * tgt.v;
  Eigen::PartialPivLU<CMat> lu(ut.adjoint());
  if (ut.size() > 0 && !(lu.rcond() >= kThoulessRcond))
    throw NumericalError(
        "thouless: u~ is singular (orthogonal or opposite-parity states)");
  BcsState s;
  CMat t = -lu.solve(CMat(vt.adjoint()));
  s.thouless = (t - t.transpose()) / 2.0;
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < ut.rows(); ++i)
    logdet += std::log(std::abs(lu.matrixLU()(i, i)));
  s.log_norm = 0.5 * logdet;
  return s;
}

LogValue overlap_log(const BcsState& bra, const BcsState& ket) {
  const Eigen::Index n = bra.thouless.rows();
  if (ket.thouless.rows() != n) throw ConfigError("overlap: dimension mismatch");
  if (n == 0) return {};
  CMat b(2 * n, 2 * n);
  const CMat id = CMat::Identity(n, n);
  b << ket.thouless, -id, id, -bra.thouless.conjugate();
  LogValue pf = pfaffian_log(b);
  if ((n * (n + 1) / 2) % 2 != 0) pf.phase = -pf.phase;
  pf.log_abs += bra.log_norm + ket.log_norm;
  return pf;
}

cplx overlap(const BcsState& bra, const BcsState& ket) {
  return overlap_log(bra, ket).value();
}

BogoliubovBasis parity_string_transform(const BogoliubovBasis& basis,
                                        const std::vector<int>& plaquettes) {
  BogoliubovBasis out = basis;
  for (int p : plaquettes) {
    if (p < 0 || p >= out.u.rows())
      throw ConfigError("parity string plaquette out of range");
    out.u.row(p) *= -1.0;
    out.v.row(p) *= -1.0;
  }
  return out;
}

BogoliubovBasis evolve(const BogoliubovBasis& basis, const CMat& u) {
  if (u.rows() != 2 * basis.u.rows() || u.cols() != u.rows())
    throw ConfigError("evolve: dimension mismatch");
  if (max_abs(u.adjoint() * u - CMat::Identity(u.rows(), u.cols())) > 1e-8)
    throw NumericalError("evolve: propagator is not unitary");
  const CMat w = u * basis.columns();
  BogoliubovBasis out = basis;
  out.u = w.topRows(basis.u.rows());
  out.v = w.bottomRows(basis.u.rows());
  return out;
}

double expectation(const CMat& m, const BogoliubovBasis& basis) {
  if (m.rows() != 2 * basis.u.rows())
    throw ConfigError("expectation: dimension mismatch");
  const CMat w1 = basis.columns();
  const cplx val = -0.5 * (w1.adjoint() * (m * w1)).trace();
  const double scale = std::max(1.0, max_abs(m)) * std::max<double>(1, m.rows());
  if (std::abs(val.imag()) > 1e-10 * scale)
    throw NumericalError("expectation value has an imaginary part");
  return val.real();
}

double expectation(const QuadraticOperator& h, const BogoliubovBasis& basis) {
  return expectation(h.matrix(), basis);
}

}  // namespace fdtc
