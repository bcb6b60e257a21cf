#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace fdtc;
using namespace fdtc::cli;

namespace {

struct Flags {
  std::string config;
  std::string out;
  int threads = 0;
  bool dry_run = false;
  std::string sector;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration")->required();
  sub->add_option("--out", f.out, "output directory (overrides the config)");
  sub->add_option("--threads", f.threads, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  sub->add_flag("--dry-run", f.dry_run, "print the resolved plan without computing");
  sub->add_option("--sector", f.sector,
                  "boundary sector PP|PA|AP|AA, or vacuum|fermion for exchange");
}

int run(Command cmd, bool is_exchange, const Flags& f) {
  RunConfig c = load_config(f.config);
  if (!f.out.empty()) c.out = f.out;
  if (f.threads > 0) c.threads = f.threads;
  CommandOptions o;
  o.dry_run = f.dry_run;
  if (!f.sector.empty()) {
    if (is_exchange) o.fusion = fusion_from_string(f.sector);
    else c.sector = sector_from_string(f.sector);
  }
  return cmd(c, o, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet-BdG simulator for the driven toric code"};
  app.require_subcommand(1);
  Flags f;
  struct Sub {
    const char* name;
    const char* help;
    Command cmd;
  };
  const Sub subs[] = {
      {"spectrum", "quasienergy spectrum, edge spectrum or Majorana scan", cmd_spectrum},
      {"exchange", "vortex exchange phases", cmd_exchange},
      {"degeneracy", "sector ground energies over system sizes", cmd_degeneracy},
      {"heating", "heating measures Q(nT) and Q-bar", cmd_heating},
      {"oracle", "spin-model cross-check on the 2x2 torus", cmd_oracle},
  };
  std::vector<CLI::App*> apps;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_flags(sub, f);
    apps.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigFailure;
  }
  try {
    for (std::size_t i = 0; i < apps.size(); ++i)
      if (apps[i]->parsed()) return run(subs[i].cmd, std::string(subs[i].name) == "exchange", f);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kConfigFailure;
}
