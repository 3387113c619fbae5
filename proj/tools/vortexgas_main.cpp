// vortexgas: scenario runner for the vortex-gas / self-similarity toolkit.
//
//   vortexgas <kind> --config <file> [--seed N] [--out DIR] [--threads N]
//
// Configs are plain-text key:value files; a `preset: <name>` key pulls in a
// named parameter bundle. All outputs are files (CSV / SVG / key:value
// reports) plus a manifest; identical inputs and seed reproduce identical
// numeric outputs byte for byte.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "vortexgas/scenario.hpp"

namespace {

int run(const std::string& kind, const std::string& config_path, std::uint64_t seed,
        const std::string& out_dir, int threads) {
  vortexgas::Scenario sc;
  sc.kind = kind;
  sc.params = vortexgas::KvDoc::load(config_path);
  sc.seed = seed;
  sc.out_dir = vortexgas::resolve_out_dir(out_dir, kind);
  sc.threads = threads;

  const auto report = vortexgas::run_scenario(sc);
  std::printf("wrote %zu artifacts to %s (%.3f s)\n", report.outputs.size() + 1,
              report.out_dir.string().c_str(), report.wall_seconds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vortex-gas and self-similarity toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  int threads = 1;

  for (const char* kind : vortexgas::scenario_kinds) {
    CLI::App* sub = app.add_subcommand(kind, std::string("run a ") + kind + " scenario");
    sub->add_option("--config", config_path, "key:value scenario file")->required();
    sub->add_option("--seed", seed, "64-bit run seed");
    sub->add_option("--out", out_dir, "output directory (default: $VORTEXGAS_OUT_ROOT/<kind>)");
    sub->add_option("--threads", threads, "worker thread cap");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_ptr(argv[1])) {
      std::fprintf(stderr, "vortexgas: error [validation] unknown kind '%s'; valid kinds: %s\n",
                   argv[1], vortexgas::scenario_kinds_joined().c_str());
      return 2;
    }
    return app.exit(e);
  }

  try {
    return run(app.get_subcommands().front()->get_name(), config_path, seed, out_dir, threads);
  } catch (const vortexgas::Error& e) {
    std::fprintf(stderr, "vortexgas: error [%s] %s\n", vortexgas::errc_name(e.code()), e.what());
    return e.code() == vortexgas::errc::validation ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "vortexgas: error [internal] %s\n", e.what());
    return 1;
  }
}
