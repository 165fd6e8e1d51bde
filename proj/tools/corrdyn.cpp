#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "corrdyn/cli.hpp"

int main(int argc, char** argv) {
  using namespace corrdyn;
  CLI::App app{"Exact and numeric experiments with rational correspondences on P^1"};
  ExperimentConfig cfg;
  std::string command, name, format = "json";

  std::string commands;
  for (const auto& [n, c] : command_names()) commands += (commands.empty() ? "" : ", ") + n;
  app.add_option("command", command, "One of: " + commands)->required();
  app.add_option("name", name, "Builtin name for the example command (squares)");
  app.add_option("--A", cfg.A, "Map A, e.g. \"z^2\" or \"(z^2+1)/(z-1)\"");
  app.add_option("--B", cfg.B, "Map B");
  app.add_option("--F", cfg.F, "Outer map F for the identity command");
  app.add_option("--K", cfg.K, "Set K: \"{0, 1, 1/2, inf}\", \"roots(z^2-2)\" or a polynomial");
  app.add_option("--K2", cfg.K2, "Second set for inclusion (defaults to K)");
  app.add_flag("--equality", cfg.equality, "Check both inclusions");
  app.add_option("--steps", cfg.steps, "Orbit steps")->capture_default_str();
  app.add_option("--N", cfg.N, "Truncation size for the example command")->capture_default_str();
  app.add_option("--bound", cfg.bound, "Height bound for enumerate (natural log)")->capture_default_str();
  app.add_option("--poly", cfg.poly, "Integer polynomial for the mahler command");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--output", cfg.output, "Report file (default: stdout)");
  app.add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  app.add_option("--degree-limit", cfg.degree_limit, "Abort before a pullback of larger degree")->capture_default_str();
  app.add_option("--slack", cfg.slack, "Inflation factor for the estimated height constant")->capture_default_str();
  app.add_option("--tol", cfg.tolerance, "Numeric dedup tolerance (relative)")->capture_default_str();
  app.add_option("--precision", cfg.precision_bits, "Working precision in bits (env CORRDYN_PRECISION_BITS)")
      ->capture_default_str();
  app.add_flag("--check-exact", cfg.check_exact, "numeric: compare every step with the exact orbit");
  app.add_flag("--timing", cfg.timing, "Write wall time to <output>.timing.json (stderr without --output)");

  try {
    app.parse(argc, argv);
    cfg.command = parse_command(command);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "corrdyn: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "corrdyn: " << e.what() << "\n";
    return 2;
  }
  if (!name.empty()) {
    if (cfg.command != Command::example) {
      std::cerr << "corrdyn: unexpected argument '" << name << "'\n";
      return 2;
    }
    cfg.example_name = name;
  }
  cfg.format = format == "csv" ? Format::csv : Format::json;
  return run(cfg);
}
