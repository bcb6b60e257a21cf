#include "fdtc/floquet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <Eigen/Eigenvalues>

namespace fdtc {

namespace {

// Two-stage fourth-order commutator-free exponential integrator at the
// Gauss-Legendre nodes.
const double kGauss1 = 0.5 - std::sqrt(3.0) / 6.0;
const double kGauss2 = 0.5 + std::sqrt(3.0) / 6.0;
const double kAlpha1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
const double kAlpha2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

void check_steps(const PropagationOptions& opts) {
  if (opts.n_steps < 16)
    throw ConfigError("n_steps must be at least 16, got " + std::to_string(opts.n_steps));
}

void check_finite(const CMat& m) {
  if (!m.allFinite()) throw NumericalError("non-finite entries in the Hamiltonian");
}

/// exp(-i h H) for dense Hermitian H.
CMat expi(const CMat& hmat, double h) {
  Eigen::SelfAdjointEigenSolver<CMat> es((hmat + hmat.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  CVec ph(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, -h * es.eigenvalues()(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

CMat propagate_period(const std::function<CMat(double)>& h_fn, double period,
                      double t0, const PropagationOptions& opts) {
  check_steps(opts);
  const double h = period / opts.n_steps;
  CMat u;
  for (int k = 0; k < opts.n_steps; ++k) {
    const double t = t0 + k * h;
    CMat step;
    if (opts.scheme == Integrator::kMidpoint) {
      CMat hm = h_fn(t + 0.5 * h);
      check_finite(hm);
      step = expi(hm, h);
    } else {
      CMat h1 = h_fn(t + kGauss1 * h);
      CMat h2 = h_fn(t + kGauss2 * h);
      check_finite(h1);
      check_finite(h2);
      step = expi(kAlpha1 * h1 + kAlpha2 * h2, h) * expi(kAlpha2 * h1 + kAlpha1 * h2, h);
    }
    u = k == 0 ? step : CMat(step * u);
  }
  return u;
}

namespace {

using RowSp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using RowDense = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Row-major storage on both sides turns the sparse product into contiguous
// row updates, several times faster than the column-major layout.
template <typename Dense>
void taylor_exp(const RowSp& k, Dense& x) {
  double nrm = 0.0;
  {
    Eigen::VectorXd colsum = Eigen::VectorXd::Zero(k.cols());
    for (Eigen::Index r = 0; r < k.outerSize(); ++r)
      for (RowSp::InnerIterator it(k, r); it; ++it) colsum(it.col()) += std::abs(it.value());
    nrm = colsum.size() ? colsum.maxCoeff() : 0.0;
  }
  const int s = std::max(1, static_cast<int>(std::ceil(nrm / 0.5)));
  const RowSp ks = k / static_cast<double>(s);
  Dense term(x.rows(), x.cols());
  Dense next(x.rows(), x.cols());
  for (int rep = 0; rep < s; ++rep) {
    term = x;
    const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
    for (int j = 1; j <= 60; ++j) {
      next.noalias() = ks * term;
      term = next / static_cast<double>(j);
      x += term;
      if (term.cwiseAbs().maxCoeff() < 1e-17 * scale) break;
    }
  }
}

}  // namespace

void apply_exponential(const SpMat& k, CMat& x) {
  RowDense xr = x;
  taylor_exp(RowSp(k), xr);
  x = xr;
}

namespace {

void check_finite(const FourierSeries& series) {
  for (const auto& [m, mat] : series.terms)
    for (Eigen::Index c = 0; c < mat.outerSize(); ++c)
      for (SpMat::InnerIterator it(mat, c); it; ++it)
        if (!std::isfinite(it.value().real()) || !std::isfinite(it.value().imag()))
          throw NumericalError("non-finite entries in the Hamiltonian");
}

void step_series(const FourierSeries& series, double period, double t0,
                 const PropagationOptions& opts, RowDense& x) {
  const double h = period / opts.n_steps;
  const cplx mih(0.0, -h);
  for (int k = 0; k < opts.n_steps; ++k) {
    const double t = t0 + k * h;
    if (opts.scheme == Integrator::kMidpoint) {
      taylor_exp(RowSp(mih * series.at(t + 0.5 * h)), x);
    } else {
      const SpMat m1 = series.at(t + kGauss1 * h);
      const SpMat m2 = series.at(t + kGauss2 * h);
      taylor_exp(RowSp(mih * (kAlpha2 * m1 + kAlpha1 * m2)), x);
      taylor_exp(RowSp(mih * (kAlpha1 * m1 + kAlpha2 * m2)), x);
    }
  }
}

}  // namespace

CMat propagate_columns(const FourierSeries& series, double period, double t0,
                       const PropagationOptions& opts, const CMat& x0) {
  check_steps(opts);
  check_finite(series);
  if (x0.rows() != series.dim()) throw ConfigError("initial columns do not match the generator");
  RowDense x = x0;
  step_series(series, period, t0, opts, x);
  return x;
}

CMat propagate_period(const FourierSeries& series, double period, double t0,
                      const PropagationOptions& opts) {
  check_steps(opts);
  check_finite(series);
  const int dim = series.dim();
  const int n = dim / 2;
  RowDense x = RowDense::Identity(dim, n);
  step_series(series, period, t0, opts, x);
  CMat u(dim, dim);
  u.leftCols(n) = x;
  u.topRightCorner(n, n) = x.bottomRows(n).conjugate();
  u.bottomRightCorner(n, n) = x.topRows(n).conjugate();
  return u;
}

UnitaryEigen unitary_eigen(const CMat& u) {
  const Eigen::Index dim = u.rows();
  const double c = 0.6180339887498949;
  const CMat mix = (u + u.adjoint()) / 2.0 + c * (u - u.adjoint()) / cplx(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<CMat> es((mix + mix.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const RVec& w = es.eigenvalues();

  UnitaryEigen out;
  out.phases.resize(dim);
  out.vectors.resize(dim, dim);
  auto phase_of = [](cplx z) {
    double lam = -std::arg(z);
    if (lam <= -kPi + 1e-12) lam += 2 * kPi;
    return lam;
  };
  Eigen::Index i = 0;
  while (i < dim) {
    Eigen::Index j = i + 1;
    while (j < dim && w(j) - w(j - 1) < 1e-6) ++j;
    const Eigen::Index k = j - i;
    const CMat z = es.eigenvectors().middleCols(i, k);
    if (k == 1) {
      out.vectors.col(i) = z;
      out.phases(i) = phase_of(z.col(0).dot(u * z.col(0)));
    } else {
      // Schur form of a normal matrix is diagonal, with unitary Schur vectors
      // even across exact degeneracies.
      Eigen::ComplexSchur<CMat> cs(z.adjoint() * u * z);
      if (cs.info() != Eigen::Success) throw NumericalError("Schur step failed");
      out.vectors.middleCols(i, k) = z * cs.matrixU();
      for (Eigen::Index q = 0; q < k; ++q) out.phases(i + q) = phase_of(cs.matrixT()(q, q));
    }
    i = j;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return out.phases(a) < out.phases(b); });
  UnitaryEigen sorted;
  sorted.phases.resize(dim);
  sorted.vectors.resize(dim, dim);
  for (Eigen::Index q = 0; q < dim; ++q) {
    sorted.phases(q) = out.phases(order[static_cast<std::size_t>(q)]);
    sorted.vectors.col(q) = out.vectors.col(order[static_cast<std::size_t>(q)]);
  }
  return sorted;
}

double FloquetResult::unitarity_error() const {
  return max_abs(U_T.adjoint() * U_T - CMat::Identity(U_T.rows(), U_T.cols()));
}

FloquetResult floquet_hamiltonian(const CMat& u, double period, Frame frame,
                                  bool half_zone_shift) {
  if (u.rows() != u.cols() || u.rows() % 2 != 0)
    throw ConfigError("propagator must be square with even dimension");
  if (max_abs(u.adjoint() * u - CMat::Identity(u.rows(), u.cols())) > 1e-8)
    throw NumericalError("propagator is not unitary");
  FloquetResult r;
  r.U_T = half_zone_shift ? CMat(-u) : u;
  r.frame = frame;
  r.period = period;
  r.half_zone_shifted = half_zone_shift;

  UnitaryEigen ue = unitary_eigen(r.U_T);
  const Eigen::Index dim = u.rows();
  const Eigen::Index n = dim / 2;
  r.quasienergies = ue.phases / period;
  r.modes = ue.vectors;

  std::vector<Eigen::Index> edge, rest;
  for (Eigen::Index i = 0; i < dim; ++i)
    (std::abs(ue.phases(i)) > kPi - 1e-9 ? edge : rest).push_back(i);

  CMat hf = CMat::Zero(dim, dim);
  for (Eigen::Index i : rest)
    hf += r.quasienergies(i) * ue.vectors.col(i) * ue.vectors.col(i).adjoint();
  if (!edge.empty()) {
    CMat z(dim, static_cast<Eigen::Index>(edge.size()));
    for (std::size_t q = 0; q < edge.size(); ++q) z.col(static_cast<Eigen::Index>(q)) = ue.vectors.col(edge[q]);
    CMat sz = z;
    sz.bottomRows(n) *= -1.0;
    Eigen::SelfAdjointEigenSolver<CMat> split(z.adjoint() * sz);
    const CMat y = z * split.eigenvectors();
    for (Eigen::Index q = 0; q < y.cols(); ++q) {
      const double e = (split.eigenvalues()(q) > 0 ? 1.0 : -1.0) * kPi / period;
      hf += e * y.col(q) * y.col(q).adjoint();
    }
  }
  hf = (hf + hf.adjoint()).eval() / 2.0;
  hf = (hf - particle_hole_conjugate(hf)).eval() / 2.0;
  r.H_F = QuadraticOperator(std::move(hf));
  return r;
}

FloquetResult floquet(const LatticeSpec& lat, const VortexConfig& cfg,
                      const SectorSpec& sector, const DriveParams& params,
                      const FloquetOptions& opts) {
  const FourierSeries fs = drive_series(lat, cfg, sector, params, opts.frame);
  const double period = params.period();
  CMat u = propagate_period(fs, period, params.t0, opts.propagation);
  FloquetResult r = floquet_hamiltonian(u, period, opts.frame, opts.half_zone_shift);
  r.t0 = params.t0;
  r.n_steps = opts.propagation.n_steps;
  return r;
}

double ipr(const CVec& mode) {
  const Eigen::Index n = mode.size() / 2;
  if (mode.size() == 0 || mode.size() % 2 != 0)
    throw ConfigError("ipr needs a 2N-component mode");
  RVec w = mode.head(n).cwiseAbs2() + mode.tail(n).cwiseAbs2();
  const double total = w.sum();
  if (!(total > 0.0)) throw ConfigError("ipr of a zero vector");
  w /= total;
  return w.squaredNorm();
}

SweepRow summarize(const FloquetResult& r, int index, const DriveParams& p) {
  SweepRow row;
  row.param_index = index;
  row.params = p;
  const double half = kPi / r.period;
  const Eigen::Index dim = r.quasienergies.size();
  std::vector<Eigen::Index> by_zero(static_cast<std::size_t>(dim));
  std::iota(by_zero.begin(), by_zero.end(), 0);
  std::vector<Eigen::Index> by_pi = by_zero;
  auto az = [&](Eigen::Index i) { return std::abs(r.quasienergies(i)); };
  auto ap = [&](Eigen::Index i) { return half - std::abs(r.quasienergies(i)); };
  std::stable_sort(by_zero.begin(), by_zero.end(), [&](auto a, auto b) { return az(a) < az(b); });
  std::stable_sort(by_pi.begin(), by_pi.end(), [&](auto a, auto b) { return ap(a) < ap(b); });
  row.min_abs_eps = az(by_zero[0]);
  row.min_pi_dist = ap(by_pi[0]);
  row.ipr_min_mode = ipr(r.modes.col(by_zero[0]));
  std::vector<bool> skip(static_cast<std::size_t>(dim), false);
  for (int q = 0; q < 2 && q < dim; ++q) {
    skip[static_cast<std::size_t>(by_zero[static_cast<std::size_t>(q)])] = true;
    skip[static_cast<std::size_t>(by_pi[static_cast<std::size_t>(q)])] = true;
  }
  row.gap = half;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (!skip[static_cast<std::size_t>(i)]) row.gap = std::min({row.gap, az(i), ap(i)});
  return row;
}

void parallel_for(int n, int threads, const std::function<void(int)>& f) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<SweepRow> quasienergy_sweep(const std::vector<DriveParams>& grid,
                                        const LatticeSpec& lat,
                                        const VortexConfig& cfg,
                                        const SectorSpec& sector,
                                        const FloquetOptions& opts, int threads) {
  if (grid.empty()) throw ConfigError("quasienergy sweep needs a nonempty grid");
  std::vector<SweepRow> rows(grid.size());
  parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
    const DriveParams& p = grid[static_cast<std::size_t>(i)];
    try {
      rows[static_cast<std::size_t>(i)] = summarize(floquet(lat, cfg, sector, p, opts), i, p);
    } catch (const std::exception& e) {
      throw NumericalError("sweep point " + std::to_string(i) + " (J=" + std::to_string(p.J) +
                           ", Delta=" + std::to_string(p.Delta) + ", omega=" +
                           std::to_string(p.omega) + "): " + e.what());
    }
  });
  return rows;
}

}  // namespace fdtc
