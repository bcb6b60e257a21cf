#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "fdtc/diagnostics.hpp"
#include "fock_oracle.hpp"

using namespace fdtc;

namespace {

DriveParams topological() {
  DriveParams p;
  p.J = 0.2;
  p.Delta = 0.2;
  p.omega = 3.2;
  return p;
}

DriveParams trivial() {
  DriveParams p = topological();
  p.J = 0.05;
  p.Delta = 0.05;
  return p;  // mu = -8 J
}

FloquetOptions fast() {
  FloquetOptions o;
  o.propagation = {128, Integrator::kCommutatorFree4};
  return o;
}

// Lower-band Chern number from the d-vector winding of a two-band block on a
// fine mesh with central differences. Sign follows the (1/2 pi i) sum ln U
// lattice convention: the lower band of d . sigma gives
// -(1/4 pi) int d^ . (d_x d^ x d_y d^).
double winding_chern(const BlochModel& bm, int n) {
  auto dhat = [&](double kx, double ky) {
    CMat m = bm.block(kx, ky).at(0.0);
    // m = d0 + d . sigma, m(0, 1) = d_x - i d_y
    const Eigen::Vector3d d(m(0, 1).real(), -m(0, 1).imag(), 0.5 * (m(0, 0) - m(1, 1)).real());
    return Eigen::Vector3d(d.normalized());
  };
  const double h = 2 * kPi / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double kx = (i + 0.5) * h, ky = (j + 0.5) * h;
      const Eigen::Vector3d d = dhat(kx, ky);
      const Eigen::Vector3d dx = (dhat(kx + 1e-5, ky) - dhat(kx - 1e-5, ky)) / 2e-5;
      const Eigen::Vector3d dy = (dhat(kx, ky + 1e-5) - dhat(kx, ky - 1e-5)) / 2e-5;
      total += d.dot(dx.cross(dy)) * h * h;
    }
  return -total / (4 * kPi);
}

double real_space_edge_weight(const CVec& mode, const LatticeSpec& lat) {
  const int n = lat.num_plaquettes();
  double edge = 0.0, total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double w = std::norm(mode(j)) + std::norm(mode(n + j));
    total += w;
    const int x = lat.site(j).x;
    if (x <= 1 || x >= lat.lx() - 2) edge += w;
  }
  return edge / total;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("momentum and real-space sector energies agree") {
  auto lat = build_lattice(6, 6, Topology::kTorus);
  for (DriveParams p : {topological(), trivial()}) {
    p.t0 = 0.3;
    auto mom = sector_ground_energies(lat, p, VortexConfig(lat), fast(), EnergyRoute::kMomentum);
    auto real = sector_ground_energies(lat, p, VortexConfig(lat), fast(), EnergyRoute::kRealSpace);
    CHECK(mom.momentum_route);
    CHECK_FALSE(real.momentum_route);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(mom.sectors[i].bdg_energy == doctest::Approx(real.sectors[i].bdg_energy).epsilon(1e-10));
      CHECK(mom.sectors[i].bdg_parity == real.sectors[i].bdg_parity);
      CHECK(mom.sectors[i].lowest_excitation ==
            doctest::Approx(real.sectors[i].lowest_excitation).epsilon(1e-8));
    }
    CHECK(mom.splitting == doctest::Approx(real.splitting).epsilon(1e-8));
  }
}

TEST_CASE("sector ground energy is minus half the positive quasienergies") {
  auto lat = build_lattice(6, 6, Topology::kTorus);
  DriveParams p = topological();
  p.t0 = 0.7;
  for (const auto& cfg : {VortexConfig(lat), VortexConfig::from_sites(lat, {{1, 1}, {4, 3}})}) {
    auto rep = sector_ground_energies(lat, p, cfg, fast());
    for (const auto& e : rep.sectors) {
      const RVec eps = floquet(lat, cfg, e.sector, p, fast()).quasienergies;
      double want = 0.0;
      for (double x : eps)
        if (x > 0) want -= 0.5 * x;
      CHECK(std::abs(e.bdg_energy - want) < 1e-10 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("exactly the periodic-periodic sector is odd in the topological phase") {
  auto lat = build_lattice(8, 8, Topology::kTorus);
  auto rep = sector_ground_energies(lat, topological(), VortexConfig(lat), fast());
  CHECK(rep.odd_sectors == 1);
  for (const auto& e : rep.sectors) CHECK((e.bdg_parity < 0) == (e.sector == SectorSpec{1, 1}));
  for (const auto& e : rep.sectors)
    if (e.bdg_parity < 0) CHECK(e.physical_energy > e.bdg_energy);

  auto triv = sector_ground_energies(lat, trivial(), VortexConfig(lat), fast());
  CHECK(triv.odd_sectors == 0);
}

TEST_CASE("uncoupled plaquettes give sector-independent energies") {
  auto lat = build_lattice(4, 4, Topology::kTorus);
  DriveParams p = topological();
  p.J = p.Delta = 0.0;
  auto rep = sector_ground_energies(lat, p, VortexConfig(lat), fast());
  CHECK(rep.splitting < 1e-12);
  CHECK(rep.odd_sectors == 0);
}

TEST_CASE("sector splitting shrinks with system size") {
  std::vector<double> s;
  for (int L : {4, 8, 12}) {
    auto lat = build_lattice(L, L, Topology::kTorus);
    s.push_back(sector_ground_energies(lat, topological(), VortexConfig(lat), fast()).splitting);
  }
  MESSAGE("splittings L=4,8,12: " << s[0] << " " << s[1] << " " << s[2]);
  CHECK(s[1] < s[0]);
  CHECK(s[2] < s[1]);
}

TEST_CASE("momentum route refuses vortices and cylinders") {
  auto lat = build_lattice(4, 4, Topology::kTorus);
  auto cfg = VortexConfig::from_sites(lat, {{0, 0}, {2, 2}});
  CHECK_THROWS_AS(sector_ground_energies(lat, topological(), cfg, fast(), EnergyRoute::kMomentum),
                  ConfigError);
  auto cyl = build_lattice(4, 4, Topology::kCylinder);
  CHECK_THROWS_AS(sector_ground_energies(cyl, topological(), VortexConfig(cyl)), ConfigError);
}

TEST_CASE("edge spectrum: chiral zero-energy branch only in the topological phase") {
  auto lat = build_lattice(12, 12, Topology::kCylinder);
  auto top = edge_spectrum(lat, topological(), 1, fast());
  MESSAGE("topological: gap0 " << top.bulk_gap_zero << " branches " << top.zero_branches);
  CHECK(top.zero_branches >= 1);
  CHECK(top.zero_traversing);
  CHECK(top.pi_branches == 0);
  CHECK(top.modes.size() == 2u * 12u * 12u);

  auto triv = edge_spectrum(lat, trivial(), 1, fast());
  CHECK(triv.zero_branches == 0);
  CHECK_FALSE(triv.zero_traversing);
  CHECK(triv.pi_branches == 0);
}

TEST_CASE("edge-mode census matches the real-space cylinder") {
  auto lat = build_lattice(12, 12, Topology::kCylinder);
  for (DriveParams p : {topological(), trivial()}) {
    auto es = edge_spectrum(lat, p, 1, fast());
    auto r = floquet(lat, VortexConfig(lat), {1, 1}, p, fast());
    int real_count = 0, bloch_count = 0;
    for (Eigen::Index i = 0; i < r.quasienergies.size(); ++i)
      if (std::abs(r.quasienergies(i)) < kInGapFraction * es.bulk_gap_zero &&
          real_space_edge_weight(r.modes.col(i), lat) > kEdgeWeightThreshold)
        ++real_count;
    for (const auto& m : es.modes)
      if (std::abs(m.quasienergy) < kInGapFraction * es.bulk_gap_zero &&
          m.edge_weight > kEdgeWeightThreshold)
        ++bloch_count;
    CHECK(real_count == bloch_count);
  }
  CHECK_THROWS_AS(edge_spectrum(build_lattice(4, 4, Topology::kTorus), topological()), ConfigError);
}

TEST_CASE("Chern number of the averaged model") {
  const auto eff = effective_params(topological());
  const int c24 = chern_number(eff, 24);
  const int c48 = chern_number(eff, 48);
  CHECK(c24 == 1);
  CHECK(c48 == 1);
  const double w = winding_chern(BlochModel::torus_averaged(eff), 200);
  CHECK(w == doctest::Approx(c24).epsilon(1e-3));

  auto flipped = eff;
  flipped.mu = -eff.mu;
  CHECK(chern_number(flipped, 24) == -c24);
  auto reversed = eff;
  reversed.phi_y = eff.phi_x - kPi / 2;
  CHECK(chern_number(reversed, 24) == -1);
  CHECK(chern_number(reversed, 48) == -1);
  const auto triv = effective_params(trivial());
  CHECK(chern_number(triv, 24) == 0);
  CHECK(chern_number(triv, 48) == 0);
  auto deep = eff;
  deep.mu = -6 * eff.J;
  CHECK(chern_number(deep, 24) == 0);
  CHECK(chern_number(deep, 48) == 0);

  auto critical = eff;
  critical.mu = 0.0;
  CHECK_THROWS_AS(chern_number(critical, 24), NumericalError);
  CHECK_THROWS_AS(chern_number(eff, 8), ConfigError);
}

TEST_CASE("infinite-temperature energy is the normalised Fock trace") {
  std::mt19937_64 rng(91);
  fock::Space fs(4);
  for (int trial = 0; trial < 4; ++trial) {
    CMat m = fock::random_bdg(4, rng);
    const double expected = fs.quadratic(m).trace().real() / fs.dim();
    CHECK(infinite_temperature_energy(QuadraticOperator(m)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(expected) < 1e-12);
  }
}

TEST_CASE("project_diagonal keeps degenerate blocks") {
  std::mt19937_64 rng(3);
  CMat m = fock::random_bdg(3, rng);
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(fock::random_bdg(3, rng)));
  RVec eps = RVec::LinSpaced(6, -1.0, 1.0);
  // identical eps: the projection is the identity map
  CMat full = project_diagonal(m, es.eigenvectors(), RVec::Zero(6), 1e-9);
  CHECK((full - m).cwiseAbs().maxCoeff() < 1e-12);
  // distinct eps: only diagonal matrix elements survive
  CMat diag = project_diagonal(m, es.eigenvectors(), eps, 1e-9);
  CMat in_basis = es.eigenvectors().adjoint() * diag * es.eigenvectors();
  CMat ref = es.eigenvectors().adjoint() * m * es.eigenvectors();
  CHECK((in_basis - CMat(ref.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("heating: Q(0) = 0 and the spectral shortcut matches explicit stepping") {
  auto lat = build_lattice(4, 4, Topology::kTorus);
  DriveParams p = topological();
  p.omega = 1.2;
  p.J = p.Delta = 0.3;
  auto cfg = VortexConfig::from_sites(lat, {{0, 1}, {2, 3}});
  const SectorSpec s{1, -1};
  auto rep = heating_q(40, lat, p, cfg, s, fast(), 1);
  REQUIRE(rep.q_series.size() == 41u);
  CHECK(rep.q_series[0].second == 0.0);
  CHECK(rep.E_inf == doctest::Approx(0.0));
  const auto h = bdg_averaged(lat, cfg, s, effective_params(p));
  CHECK(rep.E0 == doctest::Approx(diagonalize(h).ground_energy()).epsilon(1e-12));
  CHECK(rep.cfg_descriptor.find("vortices=2") != std::string::npos);

  auto fr = floquet(lat, cfg, s, p, fast());
  BogoliubovBasis b = physical_ground(diagonalize(h), 1);
  for (int n = 1; n <= 40; ++n) {
    b = evolve(b, fr.U_T);
    const double q = (expectation(h, b) - rep.E0) / (rep.E_inf - rep.E0);
    CHECK(rep.q_series[static_cast<std::size_t>(n)].second == doctest::Approx(q).epsilon(1e-9));
  }
  bool moved = false;
  for (auto [n, q] : rep.q_series) moved = moved || q > 1e-3;
  CHECK(moved);

  auto strided = heating_q(40, lat, p, cfg, s, fast(), 8);
  REQUIRE(strided.q_series.size() == 6u);
  CHECK(strided.q_series[5].first == 40);
  CHECK(strided.q_series[5].second == doctest::Approx(rep.q_series[40].second).epsilon(1e-12));
  CHECK_THROWS_AS(heating_q(10, lat, p, cfg, s, fast(), 0), ConfigError);
}

TEST_CASE("heating: Q stays within [0, 1.2]") {
  auto lat = build_lattice(6, 6, Topology::kTorus);
  DriveParams slow;
  slow.J = slow.Delta = slow.omega = 0.8;
  DriveParams mid;
  mid.J = mid.Delta = 0.5;
  mid.omega = 1.5;
  const std::vector<VortexConfig> cfgs = {VortexConfig(lat),
                                          VortexConfig::from_sites(lat, {{1, 1}, {4, 3}}),
                                          random_vortex_config(lat, 0.2, 5)};
  for (const DriveParams& p : {topological(), mid, slow})
    for (const auto& cfg : cfgs) {
      auto rep = heating_q(200, lat, p, cfg, {-1, -1}, fast(), 1);
      for (const auto& [n, q] : rep.q_series) {
        CHECK(q >= -1e-12);
        CHECK(q <= 1.2);
      }
    }
}

TEST_CASE("heating: static evolution gives Q-bar = 0") {
  auto lat = build_lattice(4, 4, Topology::kTorus);
  auto cfg = VortexConfig::from_sites(lat, {{1, 1}, {3, 2}});
  const SectorSpec s{-1, 1};
  const auto h = bdg_averaged(lat, cfg, s, effective_params(topological()));
  const double period = topological().period();
  CMat u = (CMat(cplx(0, -period) * h.matrix())).exp();
  auto fr = floquet_hamiltonian(u, period, Frame::kRotated);
  CHECK(std::abs(heating_qbar(fr, h)) < 1e-10);
}

TEST_CASE("heating: Q-bar is small at high frequency and grows at low frequency") {
  auto lat = build_lattice(6, 6, Topology::kTorus);
  auto cfg = random_vortex_config(lat, 0.1, 5);
  DriveParams hi = topological();
  DriveParams lo = topological();
  lo.J = lo.Delta = lo.omega = 0.8;
  FloquetOptions o = fast();
  o.propagation.n_steps = 256;
  const double qh = heating_qbar(lat, hi, cfg, {1, 1}, o);
  const double ql = heating_qbar(lat, lo, cfg, {1, 1}, o);
  MESSAGE("Q-bar high " << qh << " low " << ql);
  CHECK(qh < ql);
  CHECK(qh >= -1e-9);
}

TEST_CASE("majorana scan flags a separated vortex pair") {
  auto lat = build_lattice(12, 12, Topology::kTorus);
  auto pair = VortexConfig::from_sites(lat, {{3, 6}, {9, 6}});
  std::vector<DriveParams> grid{topological(), trivial()};
  auto rows = majorana_scan(grid, lat, pair, {1, 1}, fast(), 1);
  REQUIRE(rows.size() == 2u);
  CHECK(rows[0].zero_mode);
  CHECK_FALSE(rows[0].pi_mode);
  CHECK_FALSE(rows[1].zero_mode);
  auto empty = majorana_scan({topological()}, lat, VortexConfig(lat), {-1, -1}, fast(), 1);
  CHECK_FALSE(empty[0].zero_mode);
}

}  // TEST_SUITE
