#include "fdtc/model.hpp"

#include <cmath>

namespace fdtc {

double DriveParams::d(Axis axis, double t) const {
  double phi = axis == Axis::kX ? phi_x : phi_y;
  return J + 2.0 * Delta * std::cos(omega * t + phi);
}

double effective_mu(double omega, double mu_psi) {
  if (!(omega > 0.0)) throw ConfigError("omega must be positive");
  return omega / 2.0 - mu_psi;
}

EffectiveParams effective_params(const DriveParams& p) {
  return {effective_mu(p.omega, p.mu_psi()), p.J, p.Delta, p.phi_x, p.phi_y};
}

void validate(const DriveParams& p) {
  for (double v : {p.g, p.J, p.Delta, p.omega, p.phi_x, p.phi_y, p.t0})
    if (!std::isfinite(v)) throw ConfigError("drive parameters must be finite");
  if (!(p.g > 0.0)) throw ConfigError("g must be positive");
  if (!(p.omega > 0.0)) throw ConfigError("omega must be positive");
  if (p.J < 0.0 || p.Delta < 0.0)
    throw ConfigError("J and Delta must be non-negative");
}

QuadraticOperator::QuadraticOperator(CMat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() % 2 != 0)
    throw ConfigError("BdG matrix must be square with even dimension");
}

namespace {
double scale_of(const CMat& m) {
  return std::max(1.0, m.cwiseAbs().maxCoeff());
}
}  // namespace

double QuadraticOperator::hermiticity_error() const {
  if (m_.size() == 0) return 0.0;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() / scale_of(m_);
}

double QuadraticOperator::particle_hole_error() const {
  if (m_.size() == 0) return 0.0;
  return (particle_hole_conjugate(m_) + m_).cwiseAbs().maxCoeff() / scale_of(m_);
}

CMat particle_hole_conjugate(const CMat& m) {
  const Eigen::Index n = m.rows() / 2;
  CMat out(m.rows(), m.cols());
  out.topLeftCorner(n, n) = m.bottomRightCorner(n, n).conjugate();
  out.topRightCorner(n, n) = m.bottomLeftCorner(n, n).conjugate();
  out.bottomLeftCorner(n, n) = m.topRightCorner(n, n).conjugate();
  out.bottomRightCorner(n, n) = m.topLeftCorner(n, n).conjugate();
  return out;
}

SpMat assemble_bdg(const LatticeSpec& lat, const VortexConfig& cfg,
                   const SectorSpec& sector, cplx onsite,
                   const BondCoefficients& x, const BondCoefficients& y,
                   StringConvention conv) {
  const int n = lat.num_plaquettes();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(18 * n));
  for (int p = 0; p < n; ++p) {
    if (onsite != 0.0) {
      trip.emplace_back(p, p, onsite);
      trip.emplace_back(p + n, p + n, -onsite);
    }
  }
  // Duplicate triplets are summed, which is what a 2-wide torus needs.
  for (const Bond& b : lattice_bonds(lat)) {
    const BondCoefficients& c = b.axis == Axis::kX ? x : y;
    const double s = bond_coupling_sign(lat, cfg, sector, b.from, b.axis, conv);
    const int p = b.from;
    const int q = b.to;
    // A block and its -A^T partner
    if (c.hop_fwd != 0.0) {
      trip.emplace_back(p, q, s * c.hop_fwd);
      trip.emplace_back(q + n, p + n, -s * c.hop_fwd);
    }
    if (c.hop_bwd != 0.0) {
      trip.emplace_back(q, p, s * c.hop_bwd);
      trip.emplace_back(p + n, q + n, -s * c.hop_bwd);
    }
    if (c.pair_cc != 0.0) {
      trip.emplace_back(q, p + n, s * c.pair_cc);
      trip.emplace_back(p, q + n, -s * c.pair_cc);
    }
    if (c.pair_aa != 0.0) {
      trip.emplace_back(p + n, q, s * c.pair_aa);
      trip.emplace_back(q + n, p, -s * c.pair_aa);
    }
  }
  SpMat m(2 * n, 2 * n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(cplx(0.0));
  return m;
}

int FourierSeries::dim() const {
  return terms.empty() ? 0 : static_cast<int>(terms.front().second.rows());
}

SpMat FourierSeries::at(double t) const {
  SpMat out(dim(), dim());
  for (const auto& [m, mat] : terms)
    out += (m == 0 ? cplx(1.0) : std::polar(1.0, m * omega * t)) * mat;
  return out;
}

CMat FourierSeries::dense_at(double t) const { return CMat(at(t)); }

SpMat FourierSeries::component(int m) const {
  for (const auto& [k, mat] : terms)
    if (k == m) return mat;
  return SpMat(dim(), dim());
}

namespace {

BondCoefficients uniform(cplx hop, cplx pair_cc, cplx pair_aa) {
  return {hop, std::conj(hop), pair_cc, pair_aa};
}

}  // namespace

FourierSeries drive_series(const LatticeSpec& lat, const VortexConfig& cfg,
                           const SectorSpec& sector, const DriveParams& p,
                           Frame frame, StringConvention conv) {
  validate(p);
  FourierSeries fs;
  fs.omega = p.omega;
  const cplx ex = std::polar(p.Delta, p.phi_x);
  const cplx ey = std::polar(p.Delta, p.phi_y);
  auto add = [&](int m, cplx onsite, BondCoefficients bx, BondCoefficients by) {
    fs.terms.emplace_back(m, assemble_bdg(lat, cfg, sector, onsite, bx, by, conv));
  };
  // Every bond coefficient of the lab frame is -d_r(t); the drive
  // d_r = J + Delta e^{i(wt+phi)} + Delta e^{-i(wt+phi)} splits into m = 0, +-1.
  if (frame == Frame::kLab) {
    const cplx j = -p.J;
    add(0, p.mu_psi(), {j, j, j, j}, {j, j, j, j});
    const cplx ax = -ex, ay = -ey;
    add(1, 0.0, {ax, ax, ax, ax}, {ay, ay, ay, ay});
    const cplx bx = -std::conj(ex), by = -std::conj(ey);
    add(-1, 0.0, {bx, bx, bx, bx}, {by, by, by, by});
    return fs;
  }
  // Rotating frame: hopping keeps -d(t), f^dag f^dag picks up e^{iwt},
  // f f picks up e^{-iwt}.
  const cplx j = -p.J;
  const cplx zero{0.0};
  add(0, p.mu_psi() - p.omega / 2.0,
      {j, j, -std::conj(ex), -ex}, {j, j, -std::conj(ey), -ey});
  add(1, 0.0, {-ex, -ex, -p.J, zero}, {-ey, -ey, -p.J, zero});
  add(-1, 0.0, {-std::conj(ex), -std::conj(ex), zero, -p.J},
      {-std::conj(ey), -std::conj(ey), zero, -p.J});
  add(2, 0.0, {zero, zero, -ex, zero}, {zero, zero, -ey, zero});
  add(-2, 0.0, {zero, zero, zero, -std::conj(ex)},
      {zero, zero, zero, -std::conj(ey)});
  return fs;
}

FourierSeries averaged_series(const LatticeSpec& lat, const VortexConfig& cfg,
                              const SectorSpec& sector,
                              const EffectiveParams& eff) {
  FourierSeries fs;
  const cplx dx = std::polar(eff.Delta, eff.phi_x);
  const cplx dy = std::polar(eff.Delta, eff.phi_y);
  fs.terms.emplace_back(
      0, assemble_bdg(lat, cfg, sector, -eff.mu,
                      uniform(-eff.J, -std::conj(dx), -dx),
                      uniform(-eff.J, -std::conj(dy), -dy)));
  return fs;
}

QuadraticOperator bdg_drive(const LatticeSpec& lat, const VortexConfig& cfg,
                            const SectorSpec& sector, const DriveParams& params,
                            double t) {
  validate(params);
  const cplx dx = -params.d(Axis::kX, t);
  const cplx dy = -params.d(Axis::kY, t);
  return QuadraticOperator(CMat(assemble_bdg(
      lat, cfg, sector, params.mu_psi(), {dx, dx, dx, dx}, {dy, dy, dy, dy})));
}

QuadraticOperator bdg_rotated(const LatticeSpec& lat, const VortexConfig& cfg,
                              const SectorSpec& sector,
                              const DriveParams& params, double t) {
  validate(params);
  const double w = params.omega;
  const cplx dx = -params.d(Axis::kX, t);
  const cplx dy = -params.d(Axis::kY, t);
  const cplx up = std::polar(1.0, w * t);
  const cplx down = std::conj(up);
  return QuadraticOperator(CMat(assemble_bdg(
      lat, cfg, sector, params.mu_psi() - w / 2.0,
      {dx, dx, dx * up, dx * down}, {dy, dy, dy * up, dy * down})));
}

QuadraticOperator bdg_averaged(const LatticeSpec& lat, const VortexConfig& cfg,
                               const SectorSpec& sector,
                               const EffectiveParams& eff) {
  return QuadraticOperator(
      CMat(averaged_series(lat, cfg, sector, eff).terms.front().second));
}

CMat fourier_component(const LatticeSpec& lat, const VortexConfig& cfg,
                       const SectorSpec& sector, const DriveParams& params,
                       int m) {
  const int n = 2 * lat.num_plaquettes();
  if (m < -2 || m > 2) return CMat::Zero(n, n);
  return CMat(drive_series(lat, cfg, sector, params, Frame::kRotated).component(m));
}

CMat kick_operator(const LatticeSpec& lat, const VortexConfig& cfg,
                   const SectorSpec& sector, const DriveParams& params,
                   double t, double t0) {
  const FourierSeries fs = drive_series(lat, cfg, sector, params, Frame::kRotated);
  CMat k = CMat::Zero(fs.dim(), fs.dim());
  for (const auto& [m, mat] : fs.terms) {
    if (m == 0) continue;
    const cplx w = std::polar(1.0, m * fs.omega * t) -
                   std::polar(1.0, m * fs.omega * t0);
    k -= (w / (m * fs.omega)) * CMat(mat);
  }
  return k;
}

CMat frame_rotation(int n_modes, double omega, double t) {
  CVec d(2 * n_modes);
  d.head(n_modes).setConstant(std::polar(1.0, -omega * t / 2.0));
  d.tail(n_modes).setConstant(std::polar(1.0, omega * t / 2.0));
  CMat r = d.asDiagonal();
  return r;
}

}  // namespace fdtc
