#pragma once

// Levin-Wen exchange of two vortices on a T-junction.
//
// Geometry (stem pointing down, +x right, +y up):
//
//     a . . o . . b        a = o - l x,  b = o + l x,  c = o - l y
//           .
//           .
//           c
//
// Vortices start on a and b. The two open paths share their end point
// (vortices on o and c) and each traverse the three legs once:
//
//     P  = [a -> o, o -> c, b -> o]
//     P' = [b -> o, o -> c, a -> o]
//
// P followed by the reverse of P' moves the a-vortex below the b-vortex and
// onto b, and the b-vortex straight onto a: one counterclockwise exchange.
// Every leg is traversed once in each direction, so single-leg phases cancel
// and theta_P - theta_P' is the statistical phase. With the stem pointing up
// the exchange is clockwise.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fdtc/bcs.hpp"
#include "fdtc/floquet.hpp"
#include "fdtc/lattice.hpp"
#include "fdtc/model.hpp"

namespace fdtc {

enum class PathLabel { kP, kPPrime };

struct ExchangePath {
  std::vector<VortexMove> steps;
  VortexConfig initial;
  PathLabel label = PathLabel::kP;
  /// initial followed by the configuration after each step
  std::vector<VortexConfig> configs;
};

enum class Fusion { kVacuum, kFermion };

/// vacuum -> (A,A) = (-1,-1), fermion -> (P,P) = (+1,+1)
SectorSpec fusion_boundary(Fusion f);
std::string to_string(Fusion f);
Fusion fusion_from_string(const std::string& s);

struct TJunction {
  int center = -1;
  int arm_length = 0;
  int a = -1, b = -1, c = -1;
};

/// Throws ConfigError unless all arm ends stay at least two vertices away
/// from the x and y wrap lines.
TJunction make_junction(const LatticeSpec& lat, int center, int arm_length,
                        Dir stem = Dir::kMinusY);

/// Junction centred on the lattice.
int default_junction_center(const LatticeSpec& lat);

std::pair<ExchangePath, ExchangePath> build_levin_wen_paths(
    const LatticeSpec& lat, int junction, int arm_length, Dir stem = Dir::kMinusY);

/// Same moves undone in reverse order, starting from the final configuration.
ExchangePath reversed(const LatticeSpec& lat, const ExchangePath& path);

/// Multiset of (from_vertex, direction, string) of the elementary moves, for
/// comparing paths.
std::multiset<std::tuple<int, int, std::vector<int>>> move_multiset(const ExchangePath& path);

struct ExchangeOptions {
  FloquetOptions floquet{Frame::kRotated, {32, Integrator::kCommutatorFree4}, false};
  int threads = 1;
  /// A step element smaller than this aborts the path.
  double min_element = 1e-10;
};

struct GroundState {
  BogoliubovBasis basis;  // even parity
  BcsState state;         // relative to the path reference
  bool parity_corrected = false;
};

/// Even-parity ground state of the Floquet-BdG Hamiltonian of cfg.
BogoliubovBasis floquet_ground_basis(const LatticeSpec& lat, const VortexConfig& cfg,
                                     const SectorSpec& sector, const DriveParams& params,
                                     const FloquetOptions& opts, bool* corrected = nullptr);

GroundState ground_state_for(const LatticeSpec& lat, const VortexConfig& cfg,
                             const SectorSpec& sector, const DriveParams& params,
                             const BogoliubovBasis& reference,
                             const FloquetOptions& opts);

/// Horizontal move: <next|prev>. Vertical move: <next|Q|prev><prev|Q|prev>
/// with Q the parity string of the move, evaluated through the transformed
/// basis of prev.
cplx step_element(const BcsState& next, const BcsState& prev, const VortexMove& move,
                  const BogoliubovBasis& basis_prev, const BogoliubovBasis& reference);

struct BerryResult {
  double phase = 0.0;  // in (-pi, pi]
  std::vector<cplx> elements;
};

/// Ground states keyed by configuration, all relative to one reference.
class GroundStateTable {
 public:
  GroundStateTable(const LatticeSpec& lat, const SectorSpec& sector,
                   const DriveParams& params, const ExchangeOptions& opts);

  /// Computes every missing configuration (in parallel), the first call's
  /// first configuration becoming the reference unless one was set.
  void ensure(const std::vector<VortexConfig>& cfgs);
  void set_reference(const VortexConfig& cfg);
  const GroundState& at(const VortexConfig& cfg) const;
  const BogoliubovBasis& reference() const { return reference_; }
  std::size_t size() const { return states_.size(); }

 private:
  LatticeSpec lat_;
  SectorSpec sector_;
  DriveParams params_;
  ExchangeOptions opts_;
  bool has_reference_ = false;
  BogoliubovBasis reference_;
  std::map<VortexConfig, GroundState> states_;
};

/// Arg of the ordered product of step elements. Throws NumericalError naming
/// the step if an element falls below opts.min_element.
BerryResult berry_phase(const ExchangePath& path, GroundStateTable& table,
                        const ExchangeOptions& opts = {});
BerryResult berry_phase(const ExchangePath& path, Fusion sector, const DriveParams& params,
                        const LatticeSpec& lat, const ExchangeOptions& opts = {});

struct ExchangeResult {
  Fusion sector = Fusion::kVacuum;
  int L = 0;
  int arm_length = 0;
  double theta_P = 0.0;
  double theta_Pprime = 0.0;
  double exchange_phase = 0.0;  // theta_P - theta_P', wrapped to (-pi, pi]
  DriveParams params;
};

ExchangeResult exchange_phase(Fusion sector, const DriveParams& params,
                              const LatticeSpec& lat, int arm_length = 2,
                              const ExchangeOptions& opts = {},
                              Dir stem = Dir::kMinusY);

/// Wrap to (-pi, pi].
double wrap_phase(double x);

}  // namespace fdtc
