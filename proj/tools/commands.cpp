#include "commands.hpp"

#include <cmath>
#include <charconv>
#include <filesystem>
#include <fstream>

#include "fdtc/diagnostics.hpp"
#include "fdtc/spin_oracle.hpp"

namespace fdtc::cli {

using ojson = nlohmann::ordered_json;

namespace {

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw ConfigError("cannot write " + path.string());
    out_ << header << "\n";
  }
  Csv& operator<<(double x) { return put(format_number(x)); }
  Csv& operator<<(int x) { return put(std::to_string(x)); }
  Csv& operator<<(const std::string& s) { return put(s); }
  void end() {
    out_ << "\n";
    first_ = true;
  }

 private:
  Csv& put(const std::string& s) {
    out_ << (first_ ? "" : ", ") << s;
    first_ = false;
    return *this;
  }
  std::ofstream out_;
  bool first_ = true;
};

std::filesystem::path prepare(const RunConfig& c) {
  std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + c.out + ": " + ec.message());
  return dir;
}

void write_json(const std::filesystem::path& path, ojson body) {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  for (auto& [k, v] : body.items()) j[k] = v;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

// JSON numbers must be finite; non-finite values become null.
ojson num(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

ojson lattice_json(const LatticeSpec& lat) {
  return {{"Lx", lat.lx()}, {"Ly", lat.ly()}, {"topology", to_string(lat.topology())}};
}

ojson sites_json(const LatticeSpec& lat, const VortexConfig& cfg) {
  ojson a = ojson::array();
  for (int v : cfg.occupied_vertices()) {
    const Site s = lat.site(v);
    a.push_back({s.x, s.y});
  }
  return a;
}

void plan(std::ostream& log, const std::string& what, const RunConfig& c) {
  log << "plan: " << what << "\n" << to_json(c).dump(2) << "\n";
}

ojson sweep_json(const SweepRow& r) {
  return {{"param_index", r.param_index}, {"params", to_json(r.params)},
          {"min_abs_eps", num(r.min_abs_eps)}, {"min_pi_dist", num(r.min_pi_dist)},
          {"gap", num(r.gap)}, {"ipr_min_mode", num(r.ipr_min_mode)}};
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
  return total > 0 ? edge / total : 0.0;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::vector<double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  const double b = cxy / vx;
  const double a = (sy - b * sx) / n;
  const double r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  return {a, b, r2};
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  const LatticeSpec lat = lattice_of(c);
  const VortexConfig cfg = vortices_of(c, lat);
  const bool edge = lat.topology() == Topology::kCylinder && cfg.count() == 0 && c.grid.empty();
  if (o.dry_run) {
    plan(log, edge ? "cylinder edge spectrum by Bloch blocks"
                   : (c.grid.empty() ? "real-space Floquet spectrum"
                                     : "Majorana scan over " + std::to_string(c.grid.size()) + " grid points"),
         c);
    return kOk;
  }
  const auto dir = prepare(c);
  ojson summary;
  summary["lattice"] = lattice_json(lat);
  summary["sector"] = sector_code(c.sector);
  summary["vortices"] = sites_json(lat, cfg);

  if (edge) {
    const EdgeSpectrum es = edge_spectrum(lat, c.params, c.sector.wy, c.floquet);
    Csv csv(dir / "spectrum.csv", "momentum, quasienergy, edge_weight");
    for (const EdgeMode& m : es.modes) {
      csv << m.momentum << m.quasienergy << m.edge_weight;
      csv.end();
    }
    summary["kind"] = "edge";
    summary["params"] = to_json(c.params);
    summary["bulk_gap_zero"] = num(es.bulk_gap_zero);
    summary["bulk_gap_pi"] = num(es.bulk_gap_pi);
    summary["zero_branches"] = es.zero_branches;
    summary["pi_branches"] = es.pi_branches;
    summary["zero_traversing"] = es.zero_traversing;
    summary["pi_traversing"] = es.pi_traversing;
    try {
      summary["chern_number"] = chern_number(effective_params(c.params), c.k_grid);
    } catch (const NumericalError&) {
      summary["chern_number"] = nullptr;
    }
    write_json(dir / "spectrum.json", summary);
    log << "edge spectrum: " << es.zero_branches << " zero-energy and " << es.pi_branches
        << " pi-energy edge branches\n";
    return kOk;
  }

  if (!c.grid.empty()) {
    const auto rows = majorana_scan(c.grid, lat, cfg, c.sector, c.floquet, c.threads);
    Csv sweep(dir / "sweep.csv", "param_index, J, Delta, omega, min_abs_eps, min_pi_dist, gap, ipr_min_mode");
    Csv flags(dir / "majorana.csv", "param_index, zero_mode, pi_mode");
    ojson list = ojson::array();
    for (const MajoranaRow& m : rows) {
      const SweepRow& r = m.row;
      sweep << r.param_index << r.params.J << r.params.Delta << r.params.omega << r.min_abs_eps
            << r.min_pi_dist << r.gap << r.ipr_min_mode;
      sweep.end();
      flags << r.param_index << (m.zero_mode ? 1 : 0) << (m.pi_mode ? 1 : 0);
      flags.end();
      ojson row = sweep_json(r);
      row["zero_mode"] = m.zero_mode;
      row["pi_mode"] = m.pi_mode;
      list.push_back(row);
    }
    summary["kind"] = "majorana_scan";
    summary["flag_fraction"] = kMajoranaFlagFraction;
    summary["rows"] = list;
    write_json(dir / "sweep.json", summary);
    log << "majorana scan: " << rows.size() << " grid points\n";
    return kOk;
  }

  const FloquetResult r = floquet(lat, cfg, c.sector, c.params, c.floquet);
  const bool cyl = lat.topology() == Topology::kCylinder;
  Csv csv(dir / "spectrum.csv", cyl ? "index, quasienergy, ipr, edge_weight" : "index, quasienergy, ipr");
  for (Eigen::Index i = 0; i < r.quasienergies.size(); ++i) {
    csv << static_cast<int>(i) << r.quasienergies(i) << ipr(r.modes.col(i));
    if (cyl) csv << real_space_edge_weight(r.modes.col(i), lat);
    csv.end();
  }
  summary["kind"] = "spectrum";
  summary["summary"] = sweep_json(summarize(r, 0, c.params));
  summary["half_zone_shifted"] = r.half_zone_shifted;
  summary["unitarity_error"] = num(r.unitarity_error());
  write_json(dir / "spectrum.json", summary);
  log << "spectrum: " << r.quasienergies.size() << " quasienergies\n";
  return kOk;
}

// ---------------------------------------------------------------- exchange

int cmd_exchange(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  const LatticeSpec lat = lattice_of(c);
  std::vector<Fusion> sectors{Fusion::kVacuum, Fusion::kFermion};
  if (o.fusion) sectors = {*o.fusion};
  if (o.dry_run) {
    std::string s;
    for (Fusion f : sectors) s += (s.empty() ? "" : ", ") + to_string(f);
    plan(log, "exchange phase, sectors: " + s, c);
    return kOk;
  }
  const auto dir = prepare(c);
  ExchangeOptions eo;
  eo.floquet.frame = c.floquet.frame;
  eo.floquet.propagation = {c.exchange_steps, c.floquet.propagation.scheme};
  eo.threads = c.threads;
  eo.min_element = c.min_element;
  ojson all = ojson::array();
  for (Fusion f : sectors) {
    const ExchangeResult r = exchange_phase(f, c.params, lat, c.arm_length, eo, c.stem);
    ojson j;
    j["sector"] = to_string(r.sector);
    j["L"] = r.L;
    j["theta_P"] = num(r.theta_P);
    j["theta_Pprime"] = num(r.theta_Pprime);
    j["exchange_phase"] = num(r.exchange_phase);
    j["params"] = to_json(r.params);
    j["arm_length"] = r.arm_length;
    write_json(dir / ("exchange_" + to_string(f) + ".json"), j);
    all.push_back(j);
    log << to_string(f) << ": exchange phase " << format_number(r.exchange_phase / kPi) << " pi\n";
  }
  write_json(dir / "exchange.json", {{"results", all}});
  return kOk;
}

// ---------------------------------------------------------------- degeneracy

int cmd_degeneracy(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  if (c.topology != Topology::kTorus) throw ConfigError("degeneracy needs a torus");
  if (o.dry_run) {
    std::string s;
    for (int L : c.degeneracy_sizes) s += (s.empty() ? "" : ", ") + std::to_string(L);
    plan(log, "sector ground energies for L = " + s, c);
    return kOk;
  }
  const auto dir = prepare(c);
  Csv csv(dir / "degeneracy.csv", "L, sector, bdg_energy, bdg_parity, physical_energy, lowest_excitation");
  ojson rows = ojson::array();
  std::vector<double> xs, ys;
  bool fit_ok = true;
  for (int L : c.degeneracy_sizes) {
    const LatticeSpec lat = lattice_of(c, L);
    const DegeneracyReport rep = sector_ground_energies(lat, c.params, vortices_of(c, lat), c.floquet);
    ojson odd = ojson::array();
    for (const SectorEnergy& e : rep.sectors) {
      csv << L << sector_code(e.sector) << e.bdg_energy << e.bdg_parity << e.physical_energy
          << e.lowest_excitation;
      csv.end();
      if (e.bdg_parity < 0) odd.push_back(sector_code(e.sector));
    }
    rows.push_back({{"L", L}, {"splitting", num(rep.splitting)}, {"odd_sectors", odd},
                    {"momentum_route", rep.momentum_route}});
    if (rep.splitting > 0) {
      xs.push_back(L);
      ys.push_back(std::log(rep.splitting));
    } else {
      fit_ok = false;
    }
    log << "L = " << L << ": splitting " << format_number(rep.splitting) << ", odd sectors " << odd.dump()
        << "\n";
  }
  ojson summary{{"params", to_json(c.params)}, {"sizes", rows}};
  if (fit_ok && xs.size() >= 2) {
    const auto f = linear_fit(xs, ys);
    summary["log_splitting_fit"] = {{"intercept", num(f[0])}, {"slope", num(f[1])}, {"r2", num(f[2])}};
  } else {
    summary["log_splitting_fit"] = nullptr;
  }
  write_json(dir / "degeneracy.json", summary);
  return kOk;
}

// ---------------------------------------------------------------- heating

int cmd_heating(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  const LatticeSpec lat = lattice_of(c);
  if (o.dry_run) {
    plan(log, "heating over " + std::to_string(c.periods) + " periods, " + std::to_string(c.samples) +
                  " vortex sample(s)",
         c);
    return kOk;
  }
  const auto dir = prepare(c);
  std::vector<HeatingReport> reps(static_cast<std::size_t>(c.samples));
  parallel_for(c.samples, c.threads, [&](int s) {
    reps[static_cast<std::size_t>(s)] =
        heating_q(c.periods, lat, c.params, vortices_of(c, lat, s), c.sector, c.floquet, c.stride);
  });
  Csv csv(dir / "heating.csv", "sample, n, Q");
  ojson samples = ojson::array();
  double mean = 0.0, q_max = 0.0;
  for (int s = 0; s < c.samples; ++s) {
    const HeatingReport& r = reps[static_cast<std::size_t>(s)];
    double qm = 0.0;
    for (const auto& [n, q] : r.q_series) {
      csv << s << n << q;
      csv.end();
      qm = std::max(qm, q);
    }
    q_max = std::max(q_max, qm);
    mean += r.q_bar / c.samples;
    samples.push_back({{"sample", s}, {"configuration", r.cfg_descriptor}, {"q_bar", num(r.q_bar)},
                       {"q_max", num(qm)}, {"E0", num(r.E0)}, {"E_inf", num(r.E_inf)}});
  }
  double var = 0.0;
  for (const auto& r : reps) var += (r.q_bar - mean) * (r.q_bar - mean);
  const double std_dev = c.samples > 1 ? std::sqrt(var / (c.samples - 1)) : 0.0;
  write_json(dir / "heating.json", {{"params", to_json(c.params)},
                                    {"lattice", lattice_json(lat)},
                                    {"periods", c.periods},
                                    {"q_bar_mean", num(mean)},
                                    {"q_bar_std", num(std_dev)},
                                    {"q_max", num(q_max)},
                                    {"samples", samples}});
  log << "heating: mean Q-bar " << format_number(mean) << ", max Q " << format_number(q_max) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  if (o.dry_run) {
    plan(log, std::string("spin oracle on the 2x2 torus") + (c.oracle_control ? " with string-drop control" : ""),
         c);
    return kOk;
  }
  const auto dir = prepare(c);
  const SpinOracleReport rep = spin_oracle(c.params, c.params.t0, c.oracle_steps);
  ojson sectors = ojson::array();
  for (const auto& m : rep.sectors) {
    ojson occ = ojson::array();
    for (auto v : m.cfg.occupation()) occ.push_back(static_cast<int>(v));
    sectors.push_back({{"occupation", occ}, {"wilson", {m.wilson_x, m.wilson_y}},
                       {"fermion_sector", sector_code(m.fermion_sector)}, {"pi_shift", m.pi_shift},
                       {"mismatch", num(m.mismatch)}});
  }
  bool pass = rep.relative_mismatch < c.oracle_threshold;
  ojson j{{"params", to_json(c.params)}, {"n_steps", c.oracle_steps},
          {"max_mismatch", num(rep.max_mismatch)}, {"relative_mismatch", num(rep.relative_mismatch)},
          {"threshold", c.oracle_threshold}, {"leakage", num(rep.leakage)}, {"sectors", sectors}};
  log << "oracle: max mismatch " << format_number(rep.max_mismatch) << " (relative "
      << format_number(rep.relative_mismatch) << ", threshold " << format_number(c.oracle_threshold) << ")\n";
  if (c.oracle_control) {
    const SpinOracleReport ctl = spin_oracle(c.params, c.params.t0, c.oracle_steps, StringConvention::kDropped);
    const double ratio = ctl.relative_mismatch / std::max(rep.relative_mismatch, c.oracle_threshold);
    j["control_relative_mismatch"] = num(ctl.relative_mismatch);
    j["control_ratio"] = num(ratio);
    pass = pass && ratio >= 1e3;
    log << "control (strings dropped): relative mismatch " << format_number(ctl.relative_mismatch) << "\n";
  }
  j["pass"] = pass;
  write_json(dir / "oracle.json", j);
  log << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kOk : kNumericalFailure;
}

}  // namespace fdtc::cli
