#include <string>
#include <utility>

#include "CLI11.hpp"
#include "msint/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving integrators for abcd-Boussinesq systems"};
  app.require_subcommand(1);
  std::string config, out;
  const std::pair<const char*, const char*> commands[] = {
      {"run", "integrate and write diagnostics.csv, final_state.csv, meta.json"},
      {"dispersion", "measure discrete frequencies of the linear part, write dispersion.csv"},
      {"solitary", "solve for a traveling-wave profile, write profile.csv"},
      {"check", "run and test the invariant bounds, write check.csv; exit 1 on a violation"},
      {"convergence", "time and space self-convergence studies, write convergence.csv"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "YAML configuration file")->required();
    sub->add_option("--out", out, "output directory (overrides output.dir)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : msint::kExitConfigError;
  }
  return msint::dispatch(app.get_subcommands().front()->get_name(), config, out);
}
