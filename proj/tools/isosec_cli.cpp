#include "isosec/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace isosec;

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for functions with isotropic sections on the 2-sphere"};
  app.require_subcommand(1);

  std::string config_path, grid, out, suite = "all";
  int band = -1;
  long long seed = -1;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--grid", grid, "grid size T,P");
  app.add_option("--band", band, "harmonic band limit L");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out, "output directory");

  std::string which, input, output;
  auto* transform = app.add_subcommand("transform", "transform a grid dump (cosine, funk, symmetrize)");
  transform->add_option("which", which, "cosine | funk | symmetrize")->required();
  transform->add_option("input", input, "input grid CSV")->required();
  transform->add_option("output", output, "output grid CSV (default: stdout)");

  auto* counterexample = app.add_subcommand("counterexample", "build and check the isotropic-sections counterexample");
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suite, "newton | af | sr | lemma41 | rigidity | minkowski-rev | umbilic | all");
  verify->add_option("suite_name", suite, "suite name");
  for (auto* sub : {transform, counterexample, verify}) {
    sub->add_option("--config", config_path);
    sub->add_option("--grid", grid);
    sub->add_option("--band", band);
    sub->add_option("--seed", seed);
    sub->add_option("--out", out);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kInputError;
  }

  try {
    cli::RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw InputError("cannot open config " + config_path);
      cli::read_config(f, cfg);
    }
    if (!grid.empty()) cli::apply_setting(cfg, "grid", grid);
    if (band >= 0) cli::apply_setting(cfg, "band", std::to_string(band));
    if (seed >= 0) cli::apply_setting(cfg, "seed", std::to_string(seed));
    if (!out.empty()) cli::apply_setting(cfg, "out", out);

    if (*transform) {
      const cli::TransformKind kind = cli::parse_transform(which);
      std::ifstream in(input);
      if (!in) throw InputError("cannot open " + input);
      if (output.empty()) return cli::cmd_transform(cfg, kind, in, std::cout);
      auto f = cli::open_output(output);
      return cli::cmd_transform(cfg, kind, in, f);
    }
    if (*counterexample) return cli::cmd_counterexample(cfg, std::cout);
    return cli::cmd_verify(cfg, suite, std::cout);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return cli::kInputError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return cli::kAssertionFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "file error: " << e.what() << '\n';
    return cli::kInputError;
  }
}
