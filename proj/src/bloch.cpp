#include "fdtc/bloch.hpp"

#include <cmath>

namespace fdtc {

namespace {

constexpr int kRefSize = 4;

// Minimal-image displacement on a ring of 4; a coupling at distance 2 would
// be ambiguous and never occurs for nearest-neighbour models.
int min_image(int d, int l) {
  d = ((d % l) + l) % l;
  return d > l / 2 ? d - l : d;
}

}  // namespace

CMat DenseSeries::at(double t) const {
  CMat out = CMat::Zero(dim(), dim());
  for (const auto& [m, mat] : terms) out += (m == 0 ? cplx(1.0) : std::polar(1.0, m * omega * t)) * mat;
  return out;
}

int DenseSeries::dim() const { return terms.empty() ? 0 : static_cast<int>(terms.front().second.rows()); }

BlochModel BlochModel::extract(const LatticeSpec& ref, const FourierSeries& fs, bool cylinder) {
  BlochModel b;
  b.cylinder_ = cylinder;
  b.cell_ = cylinder ? ref.lx() : 1;
  b.omega_ = fs.omega;
  const int n = ref.num_plaquettes();
  const int c = b.cell_;
  for (const auto& [m, sp] : fs.terms) {
    const CMat mat(sp);
    // hops indexed by displacement, accumulated per Fourier index
    std::vector<Hop> local;
    auto find = [&](int dx, int dy) -> Hop& {
      for (auto& h : local)
        if (h.dx == dx && h.dy == dy) return h;
      local.push_back({dx, dy, m, CMat::Zero(2 * c, 2 * c)});
      return local.back();
    };
    for (int a = 0; a < c; ++a) {
      const int src = ref.index(cylinder ? a : 0, 0);
      for (int j = 0; j < n; ++j) {
        const Site s = ref.site(j);
        const int bcol = cylinder ? s.x : 0;
        const int dx = cylinder ? 0 : min_image(s.x, ref.lx());
        const int dy = min_image(s.y, ref.ly());
        const cplx pp = mat(src, j), ph = mat(src, n + j), hp = mat(n + src, j),
                   hh = mat(n + src, n + j);
        if (pp == cplx(0.0) && ph == cplx(0.0) && hp == cplx(0.0) && hh == cplx(0.0)) continue;
        if ((!cylinder && std::abs(s.x % ref.lx()) == ref.lx() / 2) || s.y == ref.ly() / 2)
          throw NumericalError("coupling beyond nearest neighbours in the Bloch reference");
        Hop& h = find(dx, dy);
        h.mat(a, bcol) += pp;
        h.mat(a, c + bcol) += ph;
        h.mat(c + a, bcol) += hp;
        h.mat(c + a, c + bcol) += hh;
      }
    }
    for (auto& h : local) b.hops_.push_back(std::move(h));
  }
  return b;
}

BlochModel BlochModel::torus(const DriveParams& p, Frame frame) {
  LatticeSpec ref(kRefSize, kRefSize, Topology::kTorus);
  return extract(ref, drive_series(ref, VortexConfig(ref), {1, 1}, p, frame), false);
}

BlochModel BlochModel::torus_averaged(const EffectiveParams& eff) {
  LatticeSpec ref(kRefSize, kRefSize, Topology::kTorus);
  return extract(ref, averaged_series(ref, VortexConfig(ref), {1, 1}, eff), false);
}

BlochModel BlochModel::cylinder(int lx, const DriveParams& p, Frame frame) {
  LatticeSpec ref(lx, kRefSize, Topology::kCylinder);
  return extract(ref, drive_series(ref, VortexConfig(ref), {1, 1}, p, frame), true);
}

BlochModel BlochModel::cylinder_averaged(int lx, const EffectiveParams& eff) {
  LatticeSpec ref(lx, kRefSize, Topology::kCylinder);
  return extract(ref, averaged_series(ref, VortexConfig(ref), {1, 1}, eff), true);
}

DenseSeries BlochModel::block(double kx, double ky) const {
  DenseSeries s;
  s.omega = omega_;
  for (const Hop& h : hops_) {
    const cplx phase = std::polar(1.0, (cylinder_ ? 0.0 : kx * h.dx) + ky * h.dy);
    bool found = false;
    for (auto& [m, mat] : s.terms)
      if (m == h.m) {
        mat += phase * h.mat;
        found = true;
      }
    if (!found) s.terms.push_back({h.m, phase * h.mat});
  }
  if (s.terms.empty()) s.terms.push_back({0, CMat::Zero(2 * cell_, 2 * cell_)});
  return s;
}

std::vector<double> allowed_momenta(int L, int w) {
  std::vector<double> k(static_cast<std::size_t>(L));
  for (int n = 0; n < L; ++n) k[static_cast<std::size_t>(n)] = (2 * kPi * n + (w < 0 ? kPi : 0.0)) / L;
  return k;
}

BlockFloquet block_floquet(const DenseSeries& block, double period, double t0,
                           const PropagationOptions& opts) {
  const CMat u = propagate_period([&](double t) { return block.at(t); }, period, t0, opts);
  UnitaryEigen ue = unitary_eigen(u);
  return {ue.phases / period, ue.vectors};
}

RVec block_quasienergies(const DenseSeries& block, double period, double t0,
                         const PropagationOptions& opts) {
  return block_floquet(block, period, t0, opts).quasienergies;
}

}  // namespace fdtc
