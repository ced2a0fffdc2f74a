#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cauchykit.h"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Handle {
  ck_experiment* exp;
  Handle() : exp(ck_experiment_create()) { REQUIRE(exp != nullptr); }
  ~Handle() { ck_experiment_destroy(exp); }
};

std::string write_config(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << body;
  return p.string();
}

}  // namespace

TEST_CASE("version and handle lifecycle") {
  CHECK(std::string(ck_version()).find("cauchykit") != std::string::npos);
  Handle h;
  CHECK(std::string(ck_experiment_output(h.exp)).empty());
  ck_experiment_destroy(nullptr);  // must be a no-op
}

TEST_CASE("singular values for the default config") {
  Handle h;
  double mu[16] = {};
  const int n = ck_singular_values(h.exp, mu, 16);
  CHECK(n == 16);
  CHECK(mu[0] == doctest::Approx(1.0 / std::sinh(M_PI)).epsilon(1e-12));
  for (int k = 1; k < n; ++k) CHECK(mu[k] < mu[k - 1]);
  CHECK(ck_singular_values(h.exp, nullptr, 16) == 0);
}

TEST_CASE("option setting: valid and invalid") {
  Handle h;
  CHECK(ck_experiment_set_option(h.exp, "seed", "42") == CK_OK);
  CHECK(ck_experiment_set_option(h.exp, "gamma", "0.25") == CK_OK);
  CHECK(ck_experiment_set_option(h.exp, "policy", "literal") == CK_OK);
  CHECK(ck_experiment_set_option(h.exp, "eps", "1e-2,1e-3") == CK_OK);
  CHECK(ck_experiment_set_option(h.exp, "out", "/tmp/ck_capi_out") == CK_OK);

  CHECK(ck_experiment_set_option(h.exp, "gamma", "1.5") == CK_ERR_VALIDATION);
  CHECK(ck_experiment_set_option(h.exp, "policy", "magic") == CK_ERR_VALIDATION);
  CHECK(ck_experiment_set_option(h.exp, "eps", "1e-2,banana") == CK_ERR_VALIDATION);
  CHECK(ck_experiment_set_option(h.exp, "nope", "1") == CK_ERR_VALIDATION);
  CHECK(std::string(ck_experiment_last_error(h.exp)).find("nope") != std::string::npos);
}

TEST_CASE("config loading and a full run through the C surface") {
  Handle h;
  CHECK(ck_experiment_load_config(h.exp, "/nonexistent/cfg.json") == CK_ERR_VALIDATION);
  CHECK(std::string(ck_experiment_last_error(h.exp)).size() > 0);

  const std::string bad = write_config("ck_capi_bad.json", R"({"gamma": 7})");
  CHECK(ck_experiment_load_config(h.exp, bad.c_str()) == CK_ERR_VALIDATION);

  const fs::path out = fs::temp_directory_path() / "ck_capi_run";
  fs::remove_all(out);
  const std::string good = write_config("ck_capi_good.json", R"({
    "cross_section": {"kind": "interval", "extents": [1.0, 1.0], "resolution": [64, 64]},
    "modes": 8,
    "law": {"name": "linear", "a": 0.2},
    "eps_list": [1e-2],
    "bins": 12,
    "out_dir": ")" + out.string() + R"("
  })");
  CHECK(ck_experiment_load_config(h.exp, good.c_str()) == CK_OK);

  CHECK(ck_experiment_run(h.exp, "pipeline") == CK_OK);
  const std::string text = ck_experiment_output(h.exp);
  CHECK(text.find("trace error") != std::string::npos);
  CHECK(fs::exists(out / "report.csv"));
  fs::remove_all(out);

  CHECK(ck_experiment_run(h.exp, "frobnicate") == CK_ERR_VALIDATION);
  CHECK(ck_experiment_run(nullptr, "pipeline") == CK_ERR_VALIDATION);
}

TEST_CASE("non-convergence surfaces as its own status code") {
  Handle h;
  const std::string cfg = write_config("ck_capi_diverge.json", R"({
    "cross_section": {"kind": "interval", "extents": [1.0, 1.0], "resolution": [64, 64]},
    "modes": 8,
    "law": {"name": "linear", "a": 40.0},
    "eps_list": [1e-2],
    "direct_max_iter": 20,
    "out_dir": "/tmp/ck_capi_diverge_out"
  })");
  CHECK(ck_experiment_load_config(h.exp, cfg.c_str()) == CK_OK);
  CHECK(ck_experiment_run(h.exp, "simulate") == CK_ERR_NO_CONVERGENCE);
  CHECK(std::string(ck_experiment_last_error(h.exp)).find("iteration") != std::string::npos);
}
