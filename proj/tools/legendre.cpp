// Command-line front end: legendre <command> [options].

#include <CLI11.hpp>

#include <iostream>

#include "legendre/cli.hpp"
#include "legendre/errors.hpp"

namespace cli = legendre::cli;

int main(int argc, char** argv) {
  CLI::App app{"L-functions, special values and BSD invariants of y^2 = x(x+1)(x+t^d) over F_q(t)"};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::optional<std::uint64_t> d, d_min, d_max;
  std::optional<std::string> cache_dir;
  std::string format = "json";
  std::vector<std::string> checks;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--q", config.q, "field size q, an odd prime power")->capture_default_str();
    sub->add_option("--d", d, "a single exponent d");
    sub->add_option("--d-min", d_min, "first d of a range");
    sub->add_option("--d-max", d_max, "last d of a range (inclusive)");
    sub->add_option("--cap", config.cap, "largest finite field to tabulate")->capture_default_str();
    sub->add_option("--prec", config.prec, "bits for complex embeddings")->capture_default_str();
    sub->add_option("--eps", config.eps, "epsilon in (0, 1/4) for the lower bound")->capture_default_str();
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--cache-dir", cache_dir, "directory for discrete-log tables (else LEGENDRE_CACHE_DIR)");
    sub->add_option("--jobs", config.jobs, "worker threads across d values")->capture_default_str();
  };

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const cli::RunConfig&, std::ostream&, std::ostream&);
  };
  const Entry entries[] = {
      {"lfunction", "L(T) and the special value", cli::cmd_lfunction},
      {"scan", "BSD quantities and bounds over a range of d (CSV for plotting)", cli::cmd_scan},
      {"verify", "run the oracle checks", cli::cmd_verify},
      {"orbits", "orbits of multiplication by q on Z_d", cli::cmd_orbits},
      {"jacobi", "Jacobi sums per orbit", cli::cmd_jacobi},
      {"bsd", "local data, torsion, Sha * Reg and the Brauer-Siegel ratio", cli::cmd_bsd},
      {"stickelberger", "p-adic valuations of the Jacobi sums", cli::cmd_stickelberger},
      {"bounds", "log L* / log H against the explicit band", cli::cmd_bounds},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    common(sub);
    if (std::string(e.name) == "verify") {
      sub->add_option("--check", checks, "rh, euler, stickelberger, bounds or all (repeatable)")
          ->check(CLI::IsMember({"rh", "euler", "stickelberger", "bounds", "all"}));
    }
    subs.emplace_back(sub, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kInvalid;
  }

  config.d = d;
  config.d_min = d_min;
  config.d_max = d_max;
  config.format = format == "csv" ? cli::Format::Csv : cli::Format::Json;
  config.cache_dir = cli::resolve_cache_dir(cache_dir);
  try {
    config.checks = cli::parse_checks(checks);
  } catch (const legendre::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kInvalid;
  }
  for (const auto& [sub, entry] : subs) {
    if (sub->parsed()) return entry->run(config, std::cout, std::cerr);
  }
  return cli::kInvalid;
}
