#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <list>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shockzoom/commands.hpp"
#include "shockzoom/config.hpp"
#include "shockzoom/error.hpp"

namespace {

using shockzoom::Config;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ",") + p;
  return out;
}

void apply_thread_cap() {
  const char* env = std::getenv("SHOCKZOOM_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    shockzoom::fail(shockzoom::ErrorKind::Config,
                    std::string("SHOCKZOOM_THREADS: expected a positive integer, got '") + env + "'");
  }
  omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_num_procs() * 4L)));
}

/// Flags that override one config key each; applied after the config file and
/// before --set.
struct Override {
  std::string key;
  std::vector<std::string> values;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shockzoom: vanishing-viscosity zoom experiments for scalar conservation laws"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> assignments;
  std::string out_dir;
  bool dump_defaults = false;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", assignments, "key=value override (repeatable)");
  app.add_option("--out", out_dir, "output directory (output.dir)");
  app.add_flag("--dump-defaults", dump_defaults, "print every config key with its default");

  std::list<Override> overrides;
  auto bind = [&overrides](CLI::App* sub, const std::string& flag, const std::string& key,
                           const std::string& help, int count = 1) {
    overrides.push_back({key, {}});
    auto* opt = sub->add_option(flag, overrides.back().values, help + " (" + key + ")");
    opt->expected(count);
  };

  auto* run = app.add_subcommand("run", "solve, zoom and fit one scenario across eps");
  bind(run, "--scenario", "scenario.id", "scenario id");
  bind(run, "--eps", "eps", "decreasing viscosities, comma separated");
  auto* sweep = app.add_subcommand("sweep", "L1 distance to the inviscid solution across eps");
  bind(sweep, "--scenario", "scenario.id", "scenario id");
  bind(sweep, "--eps", "eps", "decreasing viscosities, comma separated");
  auto* audit = app.add_subcommand("audit", "run one audit suite");
  bind(audit, "--suite", "audit.suite", "suite name");
  auto* ztable = app.add_subcommand("z-table", "dump the cusp profile and its derivatives");
  bind(ztable, "--t", "ztable.t", "times", -1);
  bind(ztable, "--x", "ztable.x", "space range lo hi", 2);
  bind(ztable, "--n", "ztable.n", "space samples");
  auto* profile = app.add_subcommand("profile", "dump a viscous traveling wave");
  bind(profile, "--u-minus", "profile.u_minus", "left state");
  bind(profile, "--u-plus", "profile.u_plus", "right state");
  app.add_subcommand("merge", "construct the merging eternal solution");
  app.add_subcommand("zlimit", "construct the eternal solution through the cusp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return shockzoom::kExitConfig;
  }

  try {
    apply_thread_cap();
    Config cfg = Config::defaults();
    if (!config_path.empty()) cfg.merge_file(config_path);
    if (!out_dir.empty()) cfg.set("output.dir", out_dir);
    for (const auto& o : overrides) {
      if (!o.values.empty()) cfg.set(o.key, join(o.values));
    }
    for (const auto& a : assignments) cfg.set(a);

    if (dump_defaults) {
      std::cout << Config::defaults().dump(true);
      return shockzoom::kExitOk;
    }
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
      std::cerr << app.help();
      return shockzoom::kExitConfig;
    }
    const int status = shockzoom::execute(subs.front()->get_name(), cfg, std::cerr);
    if (status != shockzoom::kExitOk) std::cerr << "assertions failed\n";
    return status;
  } catch (const shockzoom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return shockzoom::exit_status(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return shockzoom::kExitAssertion;
  }
}
