#include <CLI11.hpp>

#include "mimosa/cli_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"MIMOSA-style molecule optimization sampler"};
  app.require_subcommand(1);

  mimosa::CliOptions opt;
  std::uint64_t seed_flag = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--profile", opt.profile_path, "run profile file")->required();
    cmd->add_option("--seed", seed_flag, "override the profile RNG seed")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--out", opt.out_dir, "output directory");
  };

  CLI::App* pretrain = app.add_subcommand("pretrain", "train mGNN and bGNN");
  add_common(pretrain);

  CLI::App* optimize = app.add_subcommand("optimize", "optimize input molecules");
  add_common(optimize);
  optimize->add_option("--inputs", opt.inputs_path, "file of input SMILES")
      ->required();

  CLI::App* verify = app.add_subcommand("verify", "exact stationarity checks");
  add_common(verify);

  CLI::App* metrics = app.add_subcommand("metrics", "score a results file");
  add_common(metrics);
  metrics->add_option("--results", opt.results_path, "results.tsv to score");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (seed_set) opt.seed = seed_flag;

  if (pretrain->parsed()) return mimosa::cmd_pretrain(opt);
  if (optimize->parsed()) return mimosa::cmd_optimize(opt);
  if (verify->parsed()) return mimosa::cmd_verify(opt);
  if (metrics->parsed()) return mimosa::cmd_metrics(opt);
  return 2;
}
