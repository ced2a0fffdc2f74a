#include "cauchykit.h"

#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>

#include "cauchykit/errors.hpp"
#include "cauchykit/experiment.hpp"

struct ck_experiment {
  cauchykit::ExperimentConfig config;
  std::string output;
  std::string last_error;
};

namespace {

ck_status guard(ck_experiment* exp, const std::function<void()>& body) {
  if (!exp) return CK_ERR_VALIDATION;
  try {
    body();
    exp->last_error.clear();
    return CK_OK;
  } catch (const cauchykit::ConvergenceError& e) {
    exp->last_error = e.what();
    return CK_ERR_NO_CONVERGENCE;
  } catch (const std::exception& e) {
    exp->last_error = e.what();
    return CK_ERR_VALIDATION;
  }
}

}  // namespace

extern "C" {

ck_experiment* ck_experiment_create(void) {
  try {
    return new ck_experiment();
  } catch (...) {
    return nullptr;
  }
}

void ck_experiment_destroy(ck_experiment* exp) { delete exp; }

ck_status ck_experiment_load_config(ck_experiment* exp, const char* path) {
  return guard(exp, [&] {
    if (!path) throw cauchykit::ValidationError("config path is null");
    exp->config = cauchykit::ExperimentConfig::from_json_file(path);
  });
}

ck_status ck_experiment_set_option(ck_experiment* exp, const char* key, const char* value) {
  return guard(exp, [&] {
    if (!key || !value) throw cauchykit::ValidationError("option key/value is null");
    const std::string k = key, v = value;
    if (k == "seed") {
      exp->config.seed = std::stoull(v);
    } else if (k == "gamma") {
      exp->config.gamma = std::stod(v);
      if (!(exp->config.gamma > 0.0 && exp->config.gamma < 1.0))
        throw cauchykit::ValidationError("gamma must lie in (0,1)");
    } else if (k == "policy") {
      if (v == "mu-threshold")
        exp->config.policy = cauchykit::CutoffPolicy::MuThreshold;
      else if (v == "literal")
        exp->config.policy = cauchykit::CutoffPolicy::LiteralOrder;
      else
        throw cauchykit::ValidationError("policy must be mu-threshold|literal");
    } else if (k == "out") {
      if (v.empty()) throw cauchykit::ValidationError("output directory is empty");
      exp->config.out_dir = v;
    } else if (k == "eps") {
      std::vector<double> eps;
      std::stringstream ss(v);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        const double e = std::stod(tok, &pos);
        if (pos != tok.size() || !(e >= 0.0))
          throw cauchykit::ValidationError("bad eps entry '" + tok + "'");
        eps.push_back(e);
      }
      if (eps.empty()) throw cauchykit::ValidationError("eps list is empty");
      exp->config.eps_list = std::move(eps);
    } else {
      throw cauchykit::ValidationError("unknown option '" + k + "'");
    }
  });
}

ck_status ck_experiment_run(ck_experiment* exp, const char* command) {
  return guard(exp, [&] {
    if (!command) throw cauchykit::ValidationError("command is null");
    exp->output = cauchykit::run_command(exp->config, command);
  });
}

const char* ck_experiment_output(const ck_experiment* exp) {
  return exp ? exp->output.c_str() : "";
}

const char* ck_experiment_last_error(const ck_experiment* exp) {
  return exp ? exp->last_error.c_str() : "handle is null";
}

int ck_singular_values(ck_experiment* exp, double* out, int count) {
  if (!exp || !out || count < 1) return 0;
  try {
    const auto basis =
        cauchykit::build_basis(exp->config.cross_section, exp->config.modes);
    const int n = std::min(count, basis->count());
    for (int k = 0; k < n; ++k) out[k] = cauchykit::mu_of_mode(*basis, k);
    return n;
  } catch (const std::exception& e) {
    exp->last_error = e.what();
    return 0;
  }
}

const char* ck_version(void) { return "cauchykit 1.0.0"; }

}  // extern "C"
