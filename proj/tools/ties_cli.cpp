// ties: tie-strength signals from communication records.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 model error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "ties/commands.hpp"
#include "ties/core.hpp"

namespace {

struct Cli {
  std::string config_path;
  ties::RunConfig config;

  // Flag values land here first so that a config file can be applied
  // before explicit flags override it.
  std::string cdr, surveys, model_file, out, model;
  std::uint64_t seed = 0;
  int threads = -1;
  std::string ego;
};

bool given(const CLI::App& cmd, const std::string& name) {
  const CLI::Option* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

void finalize(Cli& cli, const CLI::App& cmd) {
  if (!cli.config_path.empty()) ties::apply_config_file(cli.config, cli.config_path);
  if (given(cmd, "--cdr")) cli.config.cdr_path = cli.cdr;
  if (given(cmd, "--surveys")) cli.config.surveys_path = cli.surveys;
  if (given(cmd, "--model-file")) cli.config.model_path = cli.model_file;
  if (given(cmd, "--out")) cli.config.out_dir = cli.out;
  if (given(cmd, "--model")) cli.config.model = cli.model;
  if (given(cmd, "--seed")) {
    cli.config.seed = cli.seed;
    cli.config.seed_set = true;
  }
  if (given(cmd, "--threads")) cli.config.threads = cli.threads;
}

void add_common(CLI::App& cmd, Cli& cli) {
  cmd.add_option("--config", cli.config_path, "key = value config file");
  cmd.add_option("--seed", cli.seed, "RNG seed");
  cmd.add_option("--out", cli.out, "output directory");
  cmd.add_option("--threads", cli.threads, "max worker threads");
}

void add_data(CLI::App& cmd, Cli& cli) {
  cmd.add_option("--cdr", cli.cdr, "communication records CSV");
  cmd.add_option("--surveys", cli.surveys, "survey JSON file");
}

void add_model(CLI::App& cmd, Cli& cli) {
  cmd.add_option("--model", cli.model,
                 "random|overlap|duration|recency|frequency|volume|ensemble|lstm");
  cmd.add_option("--model-file", cli.model_file, "saved model JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tie-strength signals from call and text records"};
  app.require_subcommand(1);

  Cli cli;

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic world");
  add_common(*synth, cli);

  CLI::App* train = app.add_subcommand("train", "fit a model on all egos");
  add_common(*train, cli);
  add_data(*train, cli);
  add_model(*train, cli);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "cross-validated model leaderboard");
  add_common(*evaluate, cli);
  add_data(*evaluate, cli);

  CLI::App* signals =
      app.add_subcommand("signals", "continuous tie signals for one ego");
  add_common(*signals, cli);
  add_data(*signals, cli);
  add_model(*signals, cli);
  signals->add_option("--ego", cli.ego, "target ego id")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "network dynamics CSV bundle");
  add_common(*analyze, cli);
  add_data(*analyze, cli);
  add_model(*analyze, cli);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    finalize(cli, *cmd);
    if (cmd == synth) ties::cmd_synth(cli.config);
    else if (cmd == train) ties::cmd_train(cli.config);
    else if (cmd == evaluate) ties::cmd_evaluate(cli.config);
    else if (cmd == signals) ties::cmd_signals(cli.config, cli.ego);
    else ties::cmd_analyze(cli.config);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ties::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const ties::ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
