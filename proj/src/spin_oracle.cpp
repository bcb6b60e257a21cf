#include "fdtc/spin_oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

#include "fdtc/bcs.hpp"

namespace fdtc {

namespace {

constexpr int kL = 2;

double wrap_angle(double a) { return std::remainder(a, 2 * kPi); }

/// Orthonormal basis of the joint eigenspace of commuting +-1 Pauli strings.
CMat joint_eigenspace(const std::vector<std::pair<PauliString, int>>& ops, int n_spins) {
  const int dim = 1 << n_spins;
  CMat p = CMat::Identity(dim, dim);
  for (const auto& [op, value] : ops) {
    const SpMat m = pauli_matrix(op, n_spins);
    p = (0.5 * (p + static_cast<double>(value) * (m * p))).eval();
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (p + p.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  CMat v(dim, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  return v;
}

std::vector<double> fermion_phases(const LatticeSpec& lat, const VortexConfig& cfg,
                                   const SectorSpec& s, const DriveParams& p,
                                   const PropagationOptions& prop, StringConvention conv) {
  const double period = p.period();
  const CMat u = propagate_period(drive_series(lat, cfg, s, p, Frame::kLab, conv), period, p.t0, prop);
  const FloquetResult fr = floquet_hamiltonian(u, period, Frame::kLab);
  const BogoliubovBasis b = diagonalize(fr.H_F);
  const int n = b.modes();
  std::vector<double> out;
  for (int occ = 0; occ < (1 << n); ++occ) {
    const int parity = b.parity * (std::popcount(static_cast<unsigned>(occ)) % 2 ? -1 : 1);
    if (parity < 0) continue;
    double e = 0.0;
    for (int k = 0; k < n; ++k) e += b.energies(k) * (((occ >> k) & 1) - 0.5);
    out.push_back(wrap_angle(-period * e));
  }
  return out;
}

}  // namespace

double circular_mismatch(std::vector<double> a, std::vector<double> b, double shift) {
  if (a.size() != b.size()) throw NumericalError("phase lists differ in length");
  for (double& x : a) x = wrap_angle(x);
  for (double& x : b) x = wrap_angle(x + shift);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t n = a.size();
  double best = n ? 2 * kPi : 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(wrap_angle(a[i] - b[(i + r) % n])));
    best = std::min(best, worst);
  }
  return best;
}

SpinOracleReport spin_oracle(const DriveParams& params, double t0, int n_steps,
                             StringConvention conv) {
  DriveParams p = params;
  p.t0 = t0;
  validate(p);
  const LatticeSpec lat(kL, kL, Topology::kTorus);
  const int n_spins = 2 * kL * kL;
  const int dim = 1 << n_spins;
  const double period = p.period();
  const PropagationOptions prop{n_steps, Integrator::kCommutatorFree4};
  const std::vector<SectorSpec> sectors = all_sectors();
  const std::array<std::pair<int, int>, 4> wilson{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

  SpinOracleReport rep;
  const int nv = lat.num_vertices();
  for (int mask = 0; mask < (1 << nv); ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) % 2) continue;
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(nv));
    for (int v = 0; v < nv; ++v) occ[static_cast<std::size_t>(v)] = (mask >> v) & 1;
    const VortexConfig cfg(lat, occ);

    const CMat u = propagate_columns(spin_series(lat, cfg, p), period, t0, prop, CMat::Identity(dim, dim));

    // spin eigenphases per Wilson sector
    std::array<std::vector<double>, 4> spin;
    for (std::size_t w = 0; w < wilson.size(); ++w) {
      std::vector<std::pair<PauliString, int>> ops;
      for (int y = 0; y < kL; ++y)
        for (int x = 0; x < kL; ++x)
          ops.push_back({boson_parity(lat, x, y), cfg.occupied(lat.index(x, y)) ? -1 : 1});
      ops.push_back({wilson_x(lat, 0), wilson[w].first});
      ops.push_back({wilson_y(lat, 0), wilson[w].second});
      const CMat v = joint_eigenspace(ops, n_spins);
      if (v.cols() != 8)
        throw NumericalError("sector bookkeeping: subspace of dimension " + std::to_string(v.cols()) +
                             " for boson mask " + std::to_string(mask));
      const CMat uv = u * v;
      const CMat block = v.adjoint() * uv;
      rep.leakage = std::max(rep.leakage, (uv - v * block).cwiseAbs().maxCoeff());
      const RVec ph = unitary_eigen(block).phases;
      spin[w].assign(ph.data(), ph.data() + ph.size());
    }
    if (rep.leakage > 1e-8) throw NumericalError("spin propagator leaks out of a conserved sector");

    std::array<std::vector<double>, 4> fermion;
    for (std::size_t s = 0; s < sectors.size(); ++s)
      fermion[s] = fermion_phases(lat, cfg, sectors[s], p, prop, conv);

    // cost[w][s] with the better of the two global signs
    double cost[4][4];
    bool shift[4][4];
    for (int w = 0; w < 4; ++w)
      for (int s = 0; s < 4; ++s) {
        const double c0 = circular_mismatch(spin[w], fermion[s], 0.0);
        const double c1 = circular_mismatch(spin[w], fermion[s], kPi);
        cost[w][s] = std::min(c0, c1);
        shift[w][s] = c1 < c0;
      }
    std::array<int, 4> perm{0, 1, 2, 3}, best_perm = perm;
    double best = 1e300;
    do {
      double worst = 0.0;
      for (int w = 0; w < 4; ++w) worst = std::max(worst, cost[w][perm[w]]);
      if (worst < best) {
        best = worst;
        best_perm = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (int w = 0; w < 4; ++w) {
      const int s = best_perm[static_cast<std::size_t>(w)];
      SpinSectorMatch m;
      m.cfg = cfg;
      m.wilson_x = wilson[static_cast<std::size_t>(w)].first;
      m.wilson_y = wilson[static_cast<std::size_t>(w)].second;
      m.fermion_sector = sectors[static_cast<std::size_t>(s)];
      m.pi_shift = shift[w][s];
      m.mismatch = cost[w][s] / period;
      rep.max_mismatch = std::max(rep.max_mismatch, m.mismatch);
      rep.sectors.push_back(m);
    }
  }
  rep.relative_mismatch = rep.max_mismatch / p.mu_psi();
  return rep;
}

}  // namespace fdtc
