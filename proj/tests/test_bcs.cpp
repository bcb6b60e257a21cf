#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "fdtc/bcs.hpp"
#include "fock_oracle.hpp"

using namespace fdtc;
using fock::gauged_vacuum;
using fock::random_basis;
using fock::random_skew;

namespace {

/// N exp(1/2 sum T_ij a_i^dag a_j^dag)|ref>
CVec thouless_state(const fock::Space& fs, const BogoliubovBasis& ref_basis,
                    const CVec& ref, const BcsState& s) {
  CMat gen = CMat::Zero(fs.dim(), fs.dim());
  for (int i = 0; i < fs.n; ++i)
    for (int j = 0; j < fs.n; ++j) {
      CMat ai = fs.quasiparticle(ref_basis, i);
      CMat aj = fs.quasiparticle(ref_basis, j);
      gen += 0.5 * s.thouless(i, j) * ai.adjoint() * aj.adjoint();
    }
  return s.norm() * (gen.exp() * ref);
}

}  // namespace

TEST_SUITE("bcs") {

TEST_CASE("pfaffian of small blocks") {
  CMat a(2, 2);
  a << 0, 3.5, -3.5, 0;
  CHECK(std::abs(pfaffian(a) - cplx(3.5)) < 1e-14);
  CMat b = CMat::Zero(6, 6);
  cplx vals[3] = {2.0, cplx(0, 1), -0.5};
  for (int k = 0; k < 3; ++k) {
    b(2 * k, 2 * k + 1) = vals[k];
    b(2 * k + 1, 2 * k) = -vals[k];
  }
  CHECK(std::abs(pfaffian(b) - vals[0] * vals[1] * vals[2]) < 1e-14);
  CHECK_THROWS_AS(pfaffian(CMat(CMat::Zero(3, 3))), ConfigError);
}

TEST_CASE("pfaffian squared equals determinant") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 * (1 + trial % 8);
    CMat a = random_skew(n, rng, trial % 2 == 0);
    cplx pf = pfaffian(a);
    cplx det = a.determinant();
    CHECK(std::abs(pf * pf - det) <= 1e-10 * std::abs(det));
  }
}

TEST_CASE("diagonalize trivial and random") {
  CMat m = CMat::Zero(4, 4);
  m(0, 0) = m(1, 1) = 2.0;
  m(2, 2) = m(3, 3) = -2.0;
  auto b = diagonalize(QuadraticOperator(m));
  CHECK((b.u - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(b.v.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(b.energies(0) == doctest::Approx(2.0));
  CHECK(b.parity == 1);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = diagonalize(QuadraticOperator(fock::random_bdg(5, rng)));
    CHECK(r.unitarity_error() < 1e-10);
    for (int i = 1; i < r.modes(); ++i) CHECK(r.energies(i) >= r.energies(i - 1));
  }
}

TEST_CASE("diagonalize resolves an exactly zero pair") {
  // two decoupled modes, one at zero energy
  CMat m = CMat::Zero(4, 4);
  m(1, 1) = 1.0;
  m(3, 3) = -1.0;
  auto b = diagonalize(QuadraticOperator(m));
  CHECK(b.unitarity_error() < 1e-12);
  CHECK(b.energies(0) == doctest::Approx(0.0));
  CHECK(b.parity_indeterminate);
}

TEST_CASE("ground parity matches the Fock ground state") {
  std::mt19937_64 rng(11);
  fock::Space fs(4);
  const CMat parity_op = fs.parity();
  for (int trial = 0; trial < 30; ++trial) {
    CMat m = fock::random_bdg(4, rng, trial % 3 == 0 ? 0.0 : 1.0);
    Eigen::SelfAdjointEigenSolver<CMat> es(fs.quadratic(m));
    CVec gs = es.eigenvectors().col(0);
    const int expected = gs.dot(parity_op * gs).real() > 0 ? 1 : -1;
    auto pr = ground_parity(QuadraticOperator(m));
    CHECK(pr.parity == expected);
    CHECK(pr.direct_parity == expected);
    auto b = diagonalize(QuadraticOperator(m));
    CHECK(b.parity == expected);
    // ground energy from the canonical form
    CHECK(b.ground_energy() == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
  }
  // empty band: Delta = 0 and every level above zero
  CMat m = CMat::Zero(8, 8);
  for (int i = 0; i < 4; ++i) {
    m(i, i) = 1.0 + i;
    m(i + 4, i + 4) = -1.0 - i;
  }
  CHECK(ground_parity(QuadraticOperator(m)).parity == 1);
}

TEST_CASE("physical_ground flips parity and is an involution") {
  std::mt19937_64 rng(5);
  fock::Space fs(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto b = diagonalize(QuadraticOperator(fock::random_bdg(4, rng)));
    CHECK(physical_ground(b, b.parity).u == b.u);
    auto flipped = physical_ground(b, -b.parity);
    CHECK(flipped.parity == -b.parity);
    CHECK(vacuum_parity(flipped) == -b.parity);
    CVec phi = fs.vacuum(flipped);
    CHECK(phi.dot(fs.parity() * phi).real() == doctest::Approx(flipped.parity));
    auto back = physical_ground(flipped, b.parity);
    CHECK((back.u - b.u).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((back.v - b.v).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("thouless state reproduces the target vacuum") {
  for (int n : {4, 6}) {
    std::mt19937_64 rng(100 + n);
    fock::Space fs(n);
    for (int trial = 0; trial < 5; ++trial) {
      auto ref = random_basis(n, rng, 1);
      auto tgt = random_basis(n, rng, 1);
      CVec r = fs.vacuum(ref);
      CVec expected = gauged_vacuum(fs, tgt, r);
      BcsState s = thouless(ref, tgt);
      CHECK((s.thouless + s.thouless.transpose()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(s.norm() == doctest::Approx(std::abs(r.dot(expected))).epsilon(1e-9));
      // determinant form of the normalisation
      CMat tt = CMat::Identity(n, n) + s.thouless.adjoint() * s.thouless;
      CHECK(s.norm() == doctest::Approx(std::pow(tt.determinant().real(), -0.25)).epsilon(1e-9));
      CVec built = thouless_state(fs, ref, r, s);
      CHECK((built - expected).norm() < 1e-8);
    }
  }
}

TEST_CASE("thouless of the reference is trivial, opposite parity is refused") {
  std::mt19937_64 rng(9);
  auto ref = random_basis(4, rng, 1);
  BcsState s = thouless(ref, ref);
  CHECK(s.thouless.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(s.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(thouless(ref, physical_ground(ref, -1)), NumericalError);
}

TEST_CASE("overlap matches the Fock inner product") {
  for (int n : {4, 6}) {
    std::mt19937_64 rng(200 + n);
    fock::Space fs(n);
    for (int trial = 0; trial < 5; ++trial) {
      const int par = trial % 2 ? 1 : -1;
      auto ref = random_basis(n, rng, par);
      auto bi = random_basis(n, rng, par);
      auto bj = random_basis(n, rng, par);
      CVec r = fs.vacuum(ref);
      CVec pi = gauged_vacuum(fs, bi, r);
      CVec pj = gauged_vacuum(fs, bj, r);
      BcsState si = thouless(ref, bi);
      BcsState sj = thouless(ref, bj);
      CHECK(std::abs(overlap(si, sj) - pi.dot(pj)) < 1e-8);
      CHECK(std::abs(overlap(si, sj) - std::conj(overlap(sj, si))) < 1e-10);
      CHECK(std::abs(overlap(si, si) - 1.0) < 1e-9);
    }
  }
  BcsState zero;
  zero.thouless = CMat::Zero(3, 3);
  CHECK(std::abs(overlap(zero, zero) - 1.0) < 1e-14);
}

TEST_CASE("parity string matrix elements match the Fock oracle") {
  for (int n : {4, 6}) {
    std::mt19937_64 rng(300 + n);
    fock::Space fs(n);
    for (int trial = 0; trial < 5; ++trial) {
      auto ref = random_basis(n, rng, 1);
      auto b0 = random_basis(n, rng, 1);
      auto b1 = random_basis(n, rng, 1);
      std::vector<int> str = {0, 2};
      if (trial % 2) str.push_back(n - 1);
      auto moved = parity_string_transform(b0, str);
      CHECK(moved.unitarity_error() < 1e-12);
      CHECK((parity_string_transform(moved, str).u - b0.u).cwiseAbs().maxCoeff() == 0.0);

      CVec r = fs.vacuum(ref);
      CVec p0 = gauged_vacuum(fs, b0, r);
      CVec p1 = gauged_vacuum(fs, b1, r);
      CMat q = fs.string_operator(str);
      cplx expected = p1.dot(q * p0) * p0.dot(q * p0);

      BcsState s0 = thouless(ref, b0);
      BcsState s1 = thouless(ref, b1);
      BcsState sq = thouless(ref, moved);
      cplx got = overlap(s1, sq) * overlap(sq, s0);
      CHECK(std::abs(got - expected) < 1e-8);
    }
  }
}

TEST_CASE("parity string transform conjugates the BdG matrix") {
  std::mt19937_64 rng(515);
  for (int n : {4, 6, 9}) {
    for (int trial = 0; trial < 4; ++trial) {
      const CMat h = fock::random_bdg(n, rng);
      std::vector<int> str = {1, n - 1};
      if (trial % 2) str.push_back(0);
      CMat q = CMat::Identity(2 * n, 2 * n);
      for (int p : str) q(p, p) = q(n + p, n + p) = -1.0;
      const CMat a = parity_string_transform(diagonalize(QuadraticOperator(h)), str).columns();
      const CMat b = diagonalize(QuadraticOperator(CMat(q * h * q))).columns();
      CHECK((a * a.adjoint() - b * b.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("expectation matches the Fock oracle") {
  for (int n : {4, 6}) {
    std::mt19937_64 rng(400 + n);
    fock::Space fs(n);
    for (int trial = 0; trial < 5; ++trial) {
      auto b = random_basis(n, rng, trial % 2 ? 1 : -1);
      CMat m = fock::random_bdg(n, rng);
      CVec phi = fs.vacuum(b);
      double expected = phi.dot(fs.quadratic(m) * phi).real();
      CHECK(expectation(m, b) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
  CMat m = CMat::Zero(4, 4);
  m(0, 0) = m(1, 1) = 2.0;
  m(2, 2) = m(3, 3) = -2.0;
  auto vac = diagonalize(QuadraticOperator(m));
  CHECK(expectation(m, vac) == doctest::Approx(-2.0));  // -1/2 sum E
}

TEST_CASE("evolve agrees with many-body evolution") {
  std::mt19937_64 rng(17);
  fock::Space fs(4);
  auto b = random_basis(4, rng, 1);
  CMat h = fock::random_bdg(4, rng);
  CMat obs = fock::random_bdg(4, rng);
  const double t = 0.7;
  CMat u = (CMat(-kI * t * h)).exp();
  auto evolved = evolve(b, u);
  CHECK(evolved.unitarity_error() < 1e-10);
  CVec phi = (CMat(-kI * t * fs.quadratic(h))).exp() * fs.vacuum(b);
  CHECK(expectation(obs, evolved) ==
        doctest::Approx(phi.dot(fs.quadratic(obs) * phi).real()).epsilon(1e-9));

  // stationarity under the basis's own Hamiltonian
  auto own = diagonalize(QuadraticOperator(h));
  auto still = evolve(own, u);
  CHECK(expectation(h, still) == doctest::Approx(own.ground_energy()).epsilon(1e-10));
  CHECK((evolve(b, CMat::Identity(8, 8)).u - b.u).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(evolve(b, 2.0 * CMat::Identity(8, 8)), NumericalError);
}

}  // TEST_SUITE
