// Command-line front end: sweeps, dip finding and oracle validation.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <numbers>

#include "gravent/gravent.hpp"

namespace {

enum Exit { ok = 0, spec_error = 2, validity_abort = 3, oracle_failure = 4 };

struct Flags {
  std::optional<double> mass, distance, omega, omega_factor, squeeze, rescale;
  std::string grid, normalize, out, format = "csv", config;
  std::vector<double> series;
  int workers = 1;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--mass", f.mass, "oscillator mass [kg]");
  app->add_option("--distance", f.distance, "trap separation d [m]");
  auto* om = app->add_option("--omega", f.omega, "trap frequency [rad/s]");
  app->add_option("--omega-factor", f.omega_factor, "trap frequency in units of omega_0 = c/(sqrt2 d)")->excludes(om);
  app->add_option("--squeeze", f.squeeze, "squeezing parameter r");
  app->add_option("--grid", f.grid, "axis grid min:max:points:lin|log");
  app->add_option("--normalize", f.normalize, "raw | plateau | refmax")
      ->check(CLI::IsMember({"raw", "plateau", "refmax"}));
  app->add_option("--rescale-coupling", f.rescale, "rescale G so that eps_1pn equals this value");
  app->add_option("--out", f.out, "output path (stdout when omitted)");
  app->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--config", f.config, "JSON spec file; flags override it");
  app->add_option("--series", f.series, "d multipliers (ground) or omega factors (squeezed, time)")->delimiter(',');
  app->add_option("--workers", f.workers, "evaluation threads")->check(CLI::PositiveNumber);
}

gravent::SweepSpec build_spec(gravent::SweepMode mode, const Flags& f) {
  using namespace gravent;
  SweepSpec s = default_spec(mode);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw DomainError("cannot open config " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("config is not valid JSON: ") + e.what());
    }
    j["mode"] = mode;
    from_json(j, s);
  }
  if (f.mass) s.params.m = *f.mass;
  if (f.distance) s.params.d = *f.distance;
  if (f.omega) {
    s.params.omega_m = *f.omega;
    s.omega_factor.reset();
  }
  if (f.omega_factor) s.omega_factor = *f.omega_factor;
  if (f.squeeze) s.params.r = *f.squeeze;
  if (!f.grid.empty()) s.grid = parse_grid(f.grid, s.grid.variable);
  if (f.normalize == "raw") s.normalization = Normalization::raw;
  if (f.normalize == "plateau") s.normalization = Normalization::per_plateau_S_p;
  if (f.normalize == "refmax") s.normalization = Normalization::per_reference_max;
  if (f.rescale) s.rescale_coupling = *f.rescale;
  if (!f.out.empty()) s.output_path = f.out;
  if (!f.series.empty()) s.series = f.series;
  if (s.omega_factor && mode != SweepMode::oracle_check && mode != SweepMode::dip_scan) {
    // single-frequency request for the omega-driven modes
    if (mode == SweepMode::squeezed_max_entropy || mode == SweepMode::time_trace) s.series = {*s.omega_factor};
    if (mode == SweepMode::ground_delocalization) throw DomainError("sweep-ground derives omega from the axis");
  }
  s.grid.check();
  return s;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gravent::DomainError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gravitationally induced entanglement between two trapped masses"};
  app.require_subcommand(1);
  Flags f;
  struct Cmd {
    const char* name;
    const char* help;
    gravent::SweepMode mode;
  };
  const Cmd cmds[] = {
      {"sweep-ground", "ground-state entropy against delta_x / x_P", gravent::SweepMode::ground_delocalization},
      {"sweep-squeezed", "maximum entropy over time against squeezing r", gravent::SweepMode::squeezed_max_entropy},
      {"time-trace", "entropy against omega_m t for fixed squeezing", gravent::SweepMode::time_trace},
      {"find-dip", "cancellation points for the ground and squeezed states", gravent::SweepMode::dip_scan},
      {"oracle-check", "closed forms against the Fock-space oracle", gravent::SweepMode::oracle_check},
  };
  std::vector<std::pair<CLI::App*, gravent::SweepMode>> subs;
  for (auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, f);
    subs.emplace_back(sub, c.mode);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? ok : spec_error;
  }

  gravent::SweepMode mode{};
  for (auto& [sub, m] : subs)
    if (sub->parsed()) mode = m;

  try {
    auto spec = build_spec(mode, f);
    if (mode == gravent::SweepMode::dip_scan) {
      emit(spec.output_path, gravent::run_dip_scan(spec).dump(2) + "\n");
      return ok;
    }
    if (mode == gravent::SweepMode::oracle_check) {
      auto rep = gravent::run_oracle_check(spec);
      emit(spec.output_path, rep.report.dump(2) + "\n");
      if (!rep.passed) std::cerr << "oracle-check: " << rep.report["failure_count"] << " failing check(s)\n";
      return rep.passed ? ok : oracle_failure;
    }
    auto res = gravent::run_sweep(spec, f.workers);
    std::ostringstream os;
    if (f.format == "json")
      os << gravent::to_json_document(res).dump(2) << '\n';
    else
      gravent::write_csv(os, res);
    emit(spec.output_path, os.str());
    return ok;
  } catch (const gravent::ValidityError& e) {
    std::cerr << "validity guard " << e.guard() << ": " << e.what() << '\n';
    return validity_abort;
  } catch (const gravent::RegimeError& e) {
    std::cerr << "regime " << e.quantity() << ": " << e.what() << '\n';
    return validity_abort;
  } catch (const gravent::DomainError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return spec_error;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return spec_error;
  }
}
