#include <algorithm>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "detdepth/cli.hpp"
#include "detdepth/error.hpp"

namespace detdepth::cli {

namespace {

struct Flag {
  std::string name;
  std::string help;
};

const std::map<std::string, std::vector<Flag>>& SubcommandFlags() {
  static const std::map<std::string, std::vector<Flag>> kFlags = {
      {"chain-separation",
       {{"k", "chain lengths, e.g. 4,6"},
        {"m", "value range"},
        {"s", "row sparsity"},
        {"dprime", "layer counts, e.g. 1-5 (default 1..k-1)"},
        {"width", "candidate counts, e.g. 1,4,16"},
        {"policy", "uniform | greedy"}}},
      {"chain-tradeoff",
       {{"k", "chain length"},
        {"m", "value range"},
        {"s", "row sparsity"},
        {"dprime", "contiguous rounds"},
        {"width", "candidate count"},
        {"bits", "message bits per position, or one value for all"}}},
      {"conservation", {{"k", "chain lengths, e.g. 1-12"}, {"d", "round counts"}}},
      {"matching-depth", {{"instance", "instance file"}, {"n", "size of a random instance"}}},
      {"dtree-depth",
       {{"n", "variables"},
        {"function", "parity | hex | formula | random"},
        {"hex", "truth table in hex"},
        {"formula", "s-expression over x1..xn"}}},
      {"qbf-depth", {{"qbf", "prenex formula text"}, {"file", "file holding the formula"}}},
      {"game-depth",
       {{"tree", "game tree file"}, {"tied", "tied chain game of this depth"}, {"p", "tremble probability"}}},
      {"distsim",
       {{"scenario", "scenario file"},
        {"builtin", "cross-dependency | cross-boundary | local-second-layer | trivial | pointwise-local"},
        {"sync", "synchronization points"}}},
  };
  return kFlags;
}

}  // namespace

int Main(int argc, char** argv) {
  if (argc >= 2 && argv[1][0] != '-') {
    const auto& names = Subcommands();
    if (std::find(names.begin(), names.end(), argv[1]) == names.end()) {
      std::cerr << "error: " << Error(ErrorCode::kUnknownSubcommand, std::string("'") + argv[1] + "'").what()
                << "\n";
      return 2;
    }
  }
  CLI::App app{"Determination depth experiments"};
  app.require_subcommand(1);
  ExperimentConfig config;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::uint64_t seed = 0;
  std::map<CLI::App*, CLI::Option*> seed_opts;
  for (const auto& name : Subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    for (const auto& flag : SubcommandFlags().at(name)) {
      sub->add_option("--" + flag.name, values[name][flag.name], flag.help);
    }
    seed_opts[sub] = sub->add_option("--seed", seed, "master seed");
    sub->add_option("--trials", config.trials, "Monte Carlo trials");
    sub->add_option("--format", config.format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--out", config.out, "report path (default stdout)");
    sub->add_option("--threads", config.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&, sub, name] {
      config.subcommand = name;
      for (const auto& flag : SubcommandFlags().at(name)) {
        if (sub->get_option("--" + flag.name)->count() > 0) config.params[flag.name] = values[name][flag.name];
      }
      if (seed_opts[sub]->count() > 0) config.seed = seed;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    Report report = Run(config);
    if (config.out.empty()) {
      std::cout << Emit(report, config.format);
    } else {
      WriteReport(report, config.format, config.out);
    }
    std::size_t failed = 0;
    for (const auto& r : report.rows) failed += r.pass ? 0 : 1;
    std::cerr << config.subcommand << ": " << report.rows.size() << " rows, " << failed << " failed, "
              << report.wall_seconds << " s\n";
    return failed == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace detdepth::cli
