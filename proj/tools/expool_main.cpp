// Command-line driver for the expool shared library.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "expool.h"

namespace {

int fail(expool_status status) {
  std::fprintf(stderr, "error: %s: %s\n", expool_status_name(status), expool_last_error());
  return 1;
}

int cmd_run(const std::string& config_path) {
  expool_result* res = nullptr;
  const expool_status s = expool_run_config_file(config_path.c_str(), &res);
  if (s != EXPOOL_OK) return fail(s);
  char buf[1024];
  expool_result_summary(res, buf, sizeof buf);
  std::printf("%s\n", buf);
  expool_result_free(res);
  return 0;
}

int cmd_gen(const std::string& spec, const std::string& out, std::uint64_t seed) {
  expool_instance* inst = nullptr;
  expool_status s = expool_instance_generate(spec.c_str(), seed, &inst);
  if (s != EXPOOL_OK) return fail(s);
  s = expool_instance_write(inst, out.c_str());
  if (s != EXPOOL_OK) {
    expool_instance_free(inst);
    return fail(s);
  }
  std::printf("wrote %s (n=%d T=%d)\n", out.c_str(), expool_instance_experts(inst),
              expool_instance_days(inst));
  expool_instance_free(inst);
  return 0;
}

int cmd_frontier(const std::string& config_path, const std::string& deltas,
                 const std::string& out) {
  const expool_status s =
      expool_frontier(config_path.c_str(), deltas.c_str(), out.c_str());
  if (s != EXPOOL_OK) return fail(s);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int cmd_reduce(const std::string& which, double delta, double epsilon, int experts,
               int days, int trials, std::uint64_t seed, const std::string& out) {
  expool_reduction* red = nullptr;
  const int yes = which == "yes" ? 1 : 0;
  const expool_status s =
      expool_reduce(yes, delta, epsilon, experts, days, trials, seed, &red);
  if (s != EXPOOL_OK) return fail(s);
  std::printf("case=%s trials=%d correct=%d mean_accuracy=%.9g\n", which.c_str(),
              expool_reduction_trials(red), expool_reduction_correct(red),
              expool_reduction_mean_accuracy(red));
  if (!out.empty()) {
    const expool_status w = expool_reduction_write_csv(red, out.c_str());
    if (w != EXPOOL_OK) {
      expool_reduction_free(red);
      return fail(w);
    }
    std::printf("wrote %s\n", out.c_str());
  }
  expool_reduction_free(red);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"expool: memory-bounded prediction-with-experts experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("--config", config_path, "key = value configuration file")->required();

  std::string gen_spec;
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "generate an instance file from a spec");
  gen->add_option("--spec", gen_spec,
                  "generator spec, e.g. iid:n=64,T=1024,best=0.9,rest=0.5")
      ->required();
  gen->add_option("--out", gen_out, "instance file to write")->required();
  gen->add_option("--seed", gen_seed, "generator seed (default 0)");

  std::string frontier_config;
  std::string frontier_deltas;
  std::string frontier_out = "frontier.csv";
  auto* frontier =
      app.add_subcommand("frontier", "sweep deltas and tabulate pool size and memory");
  frontier->add_option("--config", frontier_config, "base configuration file")->required();
  frontier->add_option("--deltas", frontier_deltas, "comma-separated list, e.g. 0.5,0.25")
      ->required();
  frontier->add_option("--out", frontier_out, "output CSV (default frontier.csv)");

  std::string reduce_case;
  double reduce_delta = 0.1;
  double reduce_epsilon = -1.0;
  int reduce_experts = 32;
  int reduce_days = 2000;
  int reduce_trials = 100;
  std::uint64_t reduce_seed = 0;
  std::string reduce_out;
  auto* reduce = app.add_subcommand("reduce", "run the masked detection experiment");
  reduce->add_option("--case", reduce_case, "yes or no")
      ->required()
      ->check(CLI::IsMember({"yes", "no"}));
  reduce->add_option("--delta", reduce_delta, "oracle regret target (default 0.1)");
  reduce->add_option("--epsilon", reduce_epsilon,
                     "planted bias; negative selects delta*(c+1)");
  reduce->add_option("--n", reduce_experts, "expert count (default 32)");
  reduce->add_option("--days", reduce_days, "day count (default 2000)");
  reduce->add_option("--trials", reduce_trials, "trial count (default 100)");
  reduce->add_option("--seed", reduce_seed, "base seed (default 0)");
  reduce->add_option("--out", reduce_out, "verdict table CSV");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path);
  if (gen->parsed()) return cmd_gen(gen_spec, gen_out, gen_seed);
  if (frontier->parsed()) return cmd_frontier(frontier_config, frontier_deltas, frontier_out);
  if (reduce->parsed())
    return cmd_reduce(reduce_case, reduce_delta, reduce_epsilon, reduce_experts,
                      reduce_days, reduce_trials, reduce_seed, reduce_out);
  return 1;
}
