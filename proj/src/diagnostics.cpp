#include "fdtc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fdtc {

namespace {

bool is_trim(double k) {
  const double r = std::remainder(k, kPi);
  return std::abs(r) < 1e-12;
}

SectorEnergy energy_from_basis(const SectorSpec& s, const BogoliubovBasis& b) {
  SectorEnergy e;
  e.sector = s;
  e.bdg_energy = b.ground_energy();
  e.bdg_parity = b.parity;
  e.lowest_excitation = b.energies.size() ? b.energies(0) : 0.0;
  e.physical_energy = e.bdg_energy + (b.parity < 0 ? e.lowest_excitation : 0.0);
  return e;
}

SectorEnergy momentum_sector(const LatticeSpec& lat, const BlochModel& bm, const SectorSpec& s,
                             const DriveParams& p, const FloquetOptions& opts) {
  double positive = 0.0;
  double lowest = kPi / p.period();
  int parity = 1;
  for (double kx : allowed_momenta(lat.lx(), s.wx))
    for (double ky : allowed_momenta(lat.ly(), s.wy)) {
      const BlockFloquet bf = block_floquet(bm.block(kx, ky), p.period(), p.t0, opts.propagation);
      for (Eigen::Index i = 0; i < bf.quasienergies.size(); ++i) {
        const double e = bf.quasienergies(i);
        if (e > 0) positive += e;
        lowest = std::min(lowest, std::abs(e));
      }
      if (is_trim(kx) && is_trim(ky)) {
        // pairing vanishes here: the particle-like mode is occupied in the
        // ground state iff its quasienergy is negative
        Eigen::Index part = std::abs(bf.modes(0, 0)) > std::abs(bf.modes(1, 0)) ? 0 : 1;
        if (bf.quasienergies(part) < 0) parity = -parity;
      }
    }
  SectorEnergy e;
  e.sector = s;
  e.bdg_energy = -0.5 * positive;
  e.bdg_parity = parity;
  e.lowest_excitation = lowest;
  e.physical_energy = e.bdg_energy + (parity < 0 ? lowest : 0.0);
  return e;
}

double edge_weight(const CVec& mode, int lx) {
  const int n = static_cast<int>(mode.size()) / 2;
  double edge = 0.0, total = 0.0;
  for (int x = 0; x < n; ++x) {
    const double w = std::norm(mode(x)) + std::norm(mode(n + x));
    total += w;
    if (x < 2 || x >= lx - 2) edge += w;
  }
  return total > 0 ? edge / total : 0.0;
}

}  // namespace

DegeneracyReport sector_ground_energies(const LatticeSpec& lat, const DriveParams& params,
                                        const VortexConfig& cfg, const FloquetOptions& opts,
                                        EnergyRoute route) {
  if (lat.topology() != Topology::kTorus)
    throw ConfigError("sector ground energies need a torus");
  validate(params);
  const bool momentum =
      route == EnergyRoute::kMomentum || (route == EnergyRoute::kAuto && cfg.count() == 0);
  if (momentum && cfg.count() != 0)
    throw ConfigError("the momentum route needs a vortex-free configuration");
  DegeneracyReport rep;
  rep.L = lat.lx();
  rep.momentum_route = momentum;
  std::optional<BlochModel> bm;
  if (momentum) bm = BlochModel::torus(params, opts.frame);
  for (const SectorSpec& s : all_sectors()) {
    if (momentum) {
      rep.sectors.push_back(momentum_sector(lat, *bm, s, params, opts));
    } else {
      const FloquetResult r = floquet(lat, cfg, s, params, opts);
      rep.sectors.push_back(energy_from_basis(s, diagonalize(r.H_F)));
    }
  }
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& e : rep.sectors) {
    if (e.bdg_parity < 0) {
      ++rep.odd_sectors;
      continue;
    }
    lo = first ? e.bdg_energy : std::min(lo, e.bdg_energy);
    hi = first ? e.bdg_energy : std::max(hi, e.bdg_energy);
    first = false;
  }
  rep.splitting = hi - lo;
  return rep;
}

EdgeSpectrum edge_spectrum(const LatticeSpec& lat, const DriveParams& params, int wy,
                           const FloquetOptions& opts) {
  if (lat.topology() != Topology::kCylinder)
    throw ConfigError("edge spectrum needs a cylinder");
  validate(params);
  const double period = params.period();
  const double half = kPi / period;

  // bulk reference: the torus with the same momenta along y, capped mesh
  const BlochModel bulk = BlochModel::torus(params, opts.frame);
  const int mesh = std::min(lat.ly(), 64);
  EdgeSpectrum out;
  out.bulk_gap_zero = half;
  out.bulk_gap_pi = half;
  for (double kx : allowed_momenta(mesh, 1))
    for (double ky : allowed_momenta(mesh, 1)) {
      const RVec e = block_quasienergies(bulk.block(kx, ky), period, params.t0, opts.propagation);
      for (Eigen::Index i = 0; i < e.size(); ++i) {
        out.bulk_gap_zero = std::min(out.bulk_gap_zero, std::abs(e(i)));
        out.bulk_gap_pi = std::min(out.bulk_gap_pi, half - std::abs(e(i)));
      }
    }

  const BlochModel cyl = BlochModel::cylinder(lat.lx(), params, opts.frame);
  bool zero_pos = false, zero_neg = false, pi_pos = false, pi_neg = false;
  for (double ky : allowed_momenta(lat.ly(), wy)) {
    const BlockFloquet bf = block_floquet(cyl.block(0.0, ky), period, params.t0, opts.propagation);
    int nz = 0, np = 0;
    for (Eigen::Index i = 0; i < bf.quasienergies.size(); ++i) {
      const double e = bf.quasienergies(i);
      const double w = edge_weight(bf.modes.col(i), lat.lx());
      out.modes.push_back({e, w, ky});
      if (w <= kEdgeWeightThreshold) continue;
      if (std::abs(e) < kInGapFraction * out.bulk_gap_zero) {
        ++nz;
        (e >= 0 ? zero_pos : zero_neg) = true;
      }
      if (half - std::abs(e) < kInGapFraction * out.bulk_gap_pi) {
        ++np;
        (e >= 0 ? pi_pos : pi_neg) = true;
      }
    }
    out.zero_branches = std::max(out.zero_branches, nz);
    out.pi_branches = std::max(out.pi_branches, np);
  }
  out.zero_traversing = zero_pos && zero_neg;
  out.pi_traversing = pi_pos && pi_neg;
  return out;
}

std::vector<MajoranaRow> majorana_scan(const std::vector<DriveParams>& grid,
                                       const LatticeSpec& lat, const VortexConfig& cfg,
                                       const SectorSpec& sector, const FloquetOptions& opts,
                                       int threads) {
  std::vector<MajoranaRow> out;
  for (const SweepRow& r : quasienergy_sweep(grid, lat, cfg, sector, opts, threads)) {
    MajoranaRow m;
    m.row = r;
    m.zero_mode = r.min_abs_eps < kMajoranaFlagFraction * r.gap;
    m.pi_mode = r.min_pi_dist < kMajoranaFlagFraction * r.gap;
    out.push_back(m);
  }
  return out;
}

int chern_number(const EffectiveParams& eff, int k_grid) {
  if (k_grid < 24) throw ConfigError("chern_number needs k_grid >= 24");
  const BlochModel bm = BlochModel::torus_averaged(eff);
  const int n = k_grid;
  std::vector<CVec> lower(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double kx = 2 * kPi * i / n, ky = 2 * kPi * j / n;
      Eigen::SelfAdjointEigenSolver<CMat> es(bm.block(kx, ky).at(0.0));
      const RVec& e = es.eigenvalues();
      if (e(1) - e(0) < 1e-9)
        throw NumericalError("gap closes on the k mesh at (" + std::to_string(kx) + ", " +
                             std::to_string(ky) + ")");
      lower[static_cast<std::size_t>(i * n + j)] = es.eigenvectors().col(0);
    }
  auto at = [&](int i, int j) -> const CVec& {
    return lower[static_cast<std::size_t>(((i % n + n) % n) * n + ((j % n + n) % n))];
  };
  auto link = [](const CVec& a, const CVec& b) {
    const cplx z = a.dot(b);
    return z / std::abs(z);
  };
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx f = link(at(i, j), at(i + 1, j)) * link(at(i + 1, j), at(i + 1, j + 1)) *
                     link(at(i + 1, j + 1), at(i, j + 1)) * link(at(i, j + 1), at(i, j));
      total += std::arg(f);
    }
  const double c = total / (2 * kPi);
  const int rounded = static_cast<int>(std::lround(c));
  if (std::abs(c - rounded) > 1e-6) throw NumericalError("non-integer Chern sum");
  return rounded;
}

double infinite_temperature_energy(const QuadraticOperator& h) {
  // 2^-N Tr(1/2 Psi^dag M Psi): <f^dag f> = <f f^dag> = 1/2, pairings vanish
  return 0.25 * h.matrix().trace().real();
}

CMat project_diagonal(const CMat& m, const CMat& modes, const RVec& eps, double tol) {
  const Eigen::Index dim = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return eps(a) < eps(b); });
  CMat out = CMat::Zero(dim, dim);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && eps(order[j]) - eps(order[j - 1]) < tol) ++j;
    CMat z(dim, static_cast<Eigen::Index>(j - i));
    for (std::size_t q = i; q < j; ++q) z.col(static_cast<Eigen::Index>(q - i)) = modes.col(order[q]);
    out += z * (z.adjoint() * m * z) * z.adjoint();
    i = j;
  }
  return out;
}

double heating_qbar(const FloquetResult& fr, const QuadraticOperator& h_avg) {
  const BogoliubovBasis g = physical_ground(diagonalize(h_avg), 1);
  const double e0 = expectation(h_avg, g);
  const double einf = infinite_temperature_energy(h_avg);
  if (std::abs(einf - e0) < 1e-14) throw NumericalError("E_inf equals E_0");
  CMat bar = project_diagonal(h_avg.matrix(), fr.modes, fr.quasienergies, 1e-9 / fr.period);
  bar = (bar + bar.adjoint()).eval() / 2.0;
  bar = (bar - particle_hole_conjugate(bar)).eval() / 2.0;
  return (expectation(bar, g) - e0) / (einf - e0);
}

double heating_qbar(const LatticeSpec& lat, const DriveParams& params, const VortexConfig& cfg,
                    const SectorSpec& sector, const FloquetOptions& opts) {
  FloquetOptions o = opts;
  o.frame = Frame::kRotated;
  const FloquetResult fr = floquet(lat, cfg, sector, params, o);
  return heating_qbar(fr, bdg_averaged(lat, cfg, sector, effective_params(params)));
}

HeatingReport heating_q(int n_max, const LatticeSpec& lat, const DriveParams& params,
                        const VortexConfig& cfg, const SectorSpec& sector,
                        const FloquetOptions& opts, int stride) {
  if (n_max < 0 || stride < 1) throw ConfigError("heating needs n_max >= 0 and stride >= 1");
  validate(params);
  FloquetOptions o = opts;
  o.frame = Frame::kRotated;
  const FloquetResult fr = floquet(lat, cfg, sector, params, o);
  const QuadraticOperator h_avg = bdg_averaged(lat, cfg, sector, effective_params(params));
  const BogoliubovBasis g = physical_ground(diagonalize(h_avg), 1);

  HeatingReport rep;
  rep.params = params;
  std::ostringstream d;
  d << "L=" << lat.lx() << "x" << lat.ly() << " vortices=" << cfg.count() << " [";
  bool first = true;
  for (int v : cfg.occupied_vertices()) {
    const Site s = lat.site(v);
    d << (first ? "" : " ") << "(" << s.x << "," << s.y << ")";
    first = false;
  }
  d << "] sector=" << sector_label(sector);
  rep.cfg_descriptor = d.str();
  rep.E0 = expectation(h_avg, g);
  rep.E_inf = infinite_temperature_energy(h_avg);
  if (std::abs(rep.E_inf - rep.E0) < 1e-14) throw NumericalError("E_inf equals E_0");

  // U^n = V D^n V^dag: with K = V^dag W1 W1^dag V and M' = V^dag M V,
  // tr(W(n)^dag M W(n)) = sum_ab d_a^n K_ab conj(d_b^n) M'_ba.
  const UnitaryEigen ue = unitary_eigen(fr.U_T);
  const CMat c = ue.vectors.adjoint() * g.columns();
  const CMat k = c * c.adjoint();
  const CMat mp = ue.vectors.adjoint() * h_avg.matrix() * ue.vectors;
  const CMat km = k.cwiseProduct(mp.transpose());
  const Eigen::Index dim = km.rows();
  for (int n = 0; n <= n_max; n += stride) {
    CVec dn(dim);
    for (Eigen::Index a = 0; a < dim; ++a) dn(a) = std::polar(1.0, -ue.phases(a) * n);
    const cplx tr = dn.transpose() * km * dn.conjugate();
    const double e = -0.5 * tr.real();
    rep.q_series.push_back({n, n == 0 ? 0.0 : (e - rep.E0) / (rep.E_inf - rep.E0)});
  }
  rep.q_bar = heating_qbar(fr, h_avg);
  return rep;
}

}  // namespace fdtc
