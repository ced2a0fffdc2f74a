// cauchykit command-line driver.  Links only the public C API.
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cauchykit.h"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::string seed;
  std::string eps;
  std::string gamma;
  std::string policy;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config, "JSON config file");
  sub->add_option("--out", flags.out, "output directory");
  sub->add_option("--seed", flags.seed, "RNG seed");
  sub->add_option("--eps", flags.eps, "comma-separated noise levels");
  sub->add_option("--gamma", flags.gamma, "regularization exponent in (0,1)");
  sub->add_option("--policy", flags.policy, "cutoff policy: mu-threshold | literal")
      ->check(CLI::IsMember({"mu-threshold", "literal"}));
}

int fail(const ck_experiment* exp, ck_status st) {
  std::fprintf(stderr, "error: %s\n", ck_experiment_last_error(exp));
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cauchykit: regularized elliptic Cauchy solver and corrosion-law identification"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"simulate", "cauchy",   "identify",
                                             "pipeline", "sweep",    "svdtable"};
  std::vector<CommonFlags> flags(commands.size());
  for (size_t i = 0; i < commands.size(); ++i) add_common(app.add_subcommand(commands[i]), flags[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string command;
  CommonFlags* cf = nullptr;
  for (size_t i = 0; i < commands.size(); ++i)
    if (app.got_subcommand(commands[i])) {
      command = commands[i];
      cf = &flags[i];
    }

  std::unique_ptr<ck_experiment, void (*)(ck_experiment*)> exp(ck_experiment_create(),
                                                               ck_experiment_destroy);
  if (!exp) {
    std::fprintf(stderr, "error: cannot allocate experiment handle\n");
    return 2;
  }

  if (!cf->config.empty()) {
    const ck_status st = ck_experiment_load_config(exp.get(), cf->config.c_str());
    if (st != CK_OK) return fail(exp.get(), st);
  }
  const std::pair<const char*, std::string*> opts[] = {{"out", &cf->out},
                                                       {"seed", &cf->seed},
                                                       {"eps", &cf->eps},
                                                       {"gamma", &cf->gamma},
                                                       {"policy", &cf->policy}};
  for (const auto& [key, value] : opts) {
    if (value->empty()) continue;
    const ck_status st = ck_experiment_set_option(exp.get(), key, value->c_str());
    if (st != CK_OK) return fail(exp.get(), st);
  }

  const ck_status st = ck_experiment_run(exp.get(), command.c_str());
  if (st != CK_OK) return fail(exp.get(), st);
  std::fputs(ck_experiment_output(exp.get()), stdout);
  return 0;
}
