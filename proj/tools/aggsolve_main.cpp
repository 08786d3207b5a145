// Experiment driver for the aggregative-game solver. Talks to the shared
// library exclusively through the C API in aggsolve.h.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aggsolve.h"

namespace {

struct ConfigDeleter {
  void operator()(agg_config* c) const { agg_config_free(c); }
};
using ConfigPtr = std::unique_ptr<agg_config, ConfigDeleter>;

struct CommonFlags {
  std::string config_file, model, graph, approx, out;
  std::string beta1, beta2, step, tol, max_steps, seed, repeats;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_file, "base key-value config file");
  cmd->add_option("--model", f.model, "builtin model name (cournot | demand_response)");
  cmd->add_option("--graph", f.graph, "graph spec: ring | complete | er:<p>[:<seed>]");
  cmd->add_option("--approx", f.approx,
                  "approximation: regular:<m> | greedy:<s> | box | file:<path> | exact");
  cmd->add_option("--beta1", f.beta1, "gain beta1");
  cmd->add_option("--beta2", f.beta2, "gain beta2");
  cmd->add_option("--step", f.step, "Euler step size h");
  cmd->add_option("--tol", f.tol, "terminal tolerance t_tol");
  cmd->add_option("--max-steps", f.max_steps, "step budget");
  cmd->add_option("--seed", f.seed, "RNG seed (recorded in reports)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--repeats", f.repeats, "timing repetitions (compare)");
}

int apply_flags(agg_config* cfg, const CommonFlags& f) {
  if (!f.config_file.empty() &&
      agg_config_load_file(cfg, f.config_file.c_str()) != AGG_OK) {
    std::fprintf(stderr, "error: %s\n", agg_last_error());
    return 1;
  }
  const std::pair<const char*, const std::string*> pairs[] = {
      {"model.name", &f.model},     {"graph.spec", &f.graph},
      {"approx.spec", &f.approx},   {"run.beta1", &f.beta1},
      {"run.beta2", &f.beta2},      {"run.h", &f.step},
      {"run.t_tol", &f.tol},        {"run.max_steps", &f.max_steps},
      {"run.seed", &f.seed},        {"out.dir", &f.out},
      {"compare.repeats", &f.repeats}};
  for (const auto& [key, value] : pairs)
    if (!value->empty()) agg_config_set(cfg, key, value->c_str());
  return 0;
}

int finish(agg_status status, const char* log) {
  if (log && *log) std::fputs(log, stdout);
  if (status != AGG_OK) std::fprintf(stderr, "error: %s\n", agg_last_error());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed Nash-equilibrium seeking with inscribed-polyhedron projections"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, compare_flags, graph_flags, validate_flags;
  std::string m_list = "3,4,6,8,10,12";
  std::string graph_n;

  CLI::App* cmd_run = app.add_subcommand("run", "single solver run; writes trajectory.csv and report.txt");
  add_common(cmd_run, run_flags);

  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep-polygons", "epsilon-NE sweep over inscribed m-gons (Table-1 style CSV)");
  add_common(cmd_sweep, sweep_flags);
  cmd_sweep->add_option("--m-list", m_list, "comma-separated vertex counts");

  CLI::App* cmd_compare = app.add_subcommand(
      "compare", "timing comparison of polyhedral vs exact projection modes");
  add_common(cmd_compare, compare_flags);
  std::string modes;
  cmd_compare->add_option("--modes", modes, "e.g. exact,approx:8,approx:12,approx:24");

  CLI::App* cmd_graph = app.add_subcommand("check-graph", "print balance, connectivity and lambda");
  add_common(cmd_graph, graph_flags);
  cmd_graph->add_option("--n", graph_n, "node count");

  CLI::App* cmd_validate = app.add_subcommand("validate", "run the library invariant suite");
  add_common(cmd_validate, validate_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  ConfigPtr cfg(agg_config_create());
  std::vector<char> log(1 << 16);

  if (cmd_run->parsed()) {
    if (apply_flags(cfg.get(), run_flags)) return 1;
    return finish(agg_cmd_run(cfg.get(), log.data(), log.size()), log.data());
  }
  if (cmd_sweep->parsed()) {
    if (apply_flags(cfg.get(), sweep_flags)) return 1;
    return finish(agg_cmd_sweep_polygons(cfg.get(), m_list.c_str(), log.data(), log.size()),
                  log.data());
  }
  if (cmd_compare->parsed()) {
    if (apply_flags(cfg.get(), compare_flags)) return 1;
    if (!modes.empty()) agg_config_set(cfg.get(), "compare.modes", modes.c_str());
    return finish(agg_cmd_compare(cfg.get(), log.data(), log.size()), log.data());
  }
  if (cmd_graph->parsed()) {
    if (apply_flags(cfg.get(), graph_flags)) return 1;
    if (!graph_n.empty()) agg_config_set(cfg.get(), "graph.n", graph_n.c_str());
    return finish(agg_cmd_check_graph(cfg.get(), log.data(), log.size()), log.data());
  }
  if (apply_flags(cfg.get(), validate_flags)) return 1;
  return finish(agg_cmd_validate(cfg.get(), log.data(), log.size()), log.data());
}
