// Command-line front end: schedule export, norm evaluation, verification
// suites, and ray sampling for plots.
//
// Exit codes: 0 success, 1 usage or parse error, 2 infeasible
// configuration, 3 verification failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfcnorm/io.hpp"
#include "lfcnorm/normlab.hpp"
#include "lfcnorm/params.hpp"
#include "lfcnorm/verify.hpp"

namespace {

using nlohmann::json;

lfcnorm::Config load_config(const std::string& path) {
  if (path.empty()) {
    lfcnorm::Config cfg;
    cfg.validate();
    return cfg;
  }
  return lfcnorm::parse_config_json(lfcnorm::read_file(path));
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    lfcnorm::write_file(out_path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smooth coordinate-local norms approximating the p-norm"};
  app.require_subcommand(1);

  std::string config_path, vector_path, direction_path, out_path, suite;
  long steps = 32;
  double t_max = 1.0;
  std::uint64_t seed_override = 0;
  bool seed_set = false;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config JSON file");
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };

  CLI::App* cmd_params =
      app.add_subcommand("params", "export the weight schedules as JSON");
  add_config(cmd_params);

  CLI::App* cmd_eval =
      app.add_subcommand("eval", "evaluate every norm on one vector");
  add_config(cmd_eval);
  cmd_eval->add_option("--vector", vector_path, "vector JSON file")
      ->required();

  CLI::App* cmd_verify =
      app.add_subcommand("verify", "run a named verification suite");
  add_config(cmd_verify);
  cmd_verify->add_option("--suite", suite, "suite name")->required();
  cmd_verify
      ->add_option("--seed", seed_override, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });

  CLI::App* cmd_ray = app.add_subcommand(
      "ray", "sample norms along x + t*d and emit CSV");
  add_config(cmd_ray);
  cmd_ray->add_option("--vector", vector_path, "vector JSON file")
      ->required();
  cmd_ray->add_option("--direction", direction_path, "direction JSON file")
      ->required();
  cmd_ray->add_option("--steps", steps, "number of increments (rows-1)");
  cmd_ray->add_option("--t-max", t_max, "ray endpoint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const lfcnorm::Config cfg = load_config(config_path);

    std::vector<std::string> inputs;
    if (!config_path.empty()) inputs.push_back(config_path);
    if (!vector_path.empty()) inputs.push_back(vector_path);
    if (!direction_path.empty()) inputs.push_back(direction_path);
    const lfcnorm::RunManifest manifest = lfcnorm::RunManifest::make(
        app.get_subcommands().front()->get_name(), cfg, inputs, out_path);
    manifest.check_inputs();

    if (cmd_params->parsed()) {
      const lfcnorm::ParamSchedule s = lfcnorm::build_schedule(cfg);
      emit(out_path, lfcnorm::schedule_to_json(s));
      return 0;
    }

    if (cmd_eval->parsed()) {
      const lfcnorm::SparseVector x =
          lfcnorm::parse_vector_json(lfcnorm::read_file(vector_path));
      const lfcnorm::ParamSchedule s = lfcnorm::build_schedule(cfg);
      lfcnorm::NormEvaluator ev(s, cfg.p, cfg.smoothness_order,
                                cfg.bisect_tol);
      emit(out_path, lfcnorm::report_to_json(ev.report(x)));
      return 0;
    }

    if (cmd_verify->parsed()) {
      lfcnorm::Config run_cfg = cfg;
      if (seed_set) run_cfg.seed = seed_override;
      const lfcnorm::SuiteResult res = lfcnorm::run_suite(suite, run_cfg);
      json j;
      j["suite"] = res.suite;
      j["passed"] = res.passed();
      json checks = json::array();
      for (const auto& c : res.checks) {
        json e;
        e["name"] = c.name;
        e["passed"] = c.passed;
        e["detail"] = c.detail;
        checks.push_back(e);
      }
      j["checks"] = checks;
      emit(out_path, j.dump(2) + "\n");
      return res.passed() ? 0 : 3;
    }

    if (cmd_ray->parsed()) {
      const lfcnorm::SparseVector x =
          lfcnorm::parse_vector_json(lfcnorm::read_file(vector_path));
      const lfcnorm::SparseVector d =
          lfcnorm::parse_vector_json(lfcnorm::read_file(direction_path));
      const lfcnorm::ParamSchedule s = lfcnorm::build_schedule(cfg);
      lfcnorm::NormEvaluator ev(s, cfg.p, cfg.smoothness_order,
                                cfg.bisect_tol);
      emit(out_path, lfcnorm::ray_csv(ev, x, d, steps, t_max));
      return 0;
    }
  } catch (const lfcnorm::ScheduleInfeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lfcnorm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
