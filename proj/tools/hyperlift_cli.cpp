#include <hyperlift/cli.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz and C1 lifts of hyperbolic polynomial curves"};
  app.set_version_flag("--version", "hyperlift 1.0");

  hyperlift::cli::RunConfig cfg;
  std::string i0, i1;
  double tol = 0.0;
  app.add_option("command", cfg.command, "lift | bounds | matrix | sos | check | grid2d")
      ->required()
      ->check(CLI::IsMember({"lift", "bounds", "matrix", "sos", "check", "grid2d"}));
  app.add_option("--input", cfg.input, "input JSON file")->required();
  app.add_option("--grid", cfg.grid, "number of grid points")->capture_default_str();
  app.add_option("--mode", cfg.mode, "lift mode: c0 | c1")
      ->transform(CLI::IsMember({"c0", "c1"}, CLI::ignore_case))
      ->capture_default_str();
  app.add_option("--i0", i0, "inner interval a,b (lift, matrix: lift interval)");
  app.add_option("--i1", i1, "outer interval a,b (bounds)");
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "tolerance override for the chosen command");
  app.add_option("--suite", cfg.suite, "check suite: glaeser | lagrange | taylor | all")
      ->check(CLI::IsMember({"glaeser", "lagrange", "taylor", "all"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hyperlift::cli::kValidation;
  }

  try {
    if (!i0.empty()) cfg.i0 = hyperlift::cli::parse_interval(i0);
    if (!i1.empty()) cfg.i1 = hyperlift::cli::parse_interval(i1);
  } catch (const hyperlift::Error& e) {
    std::cerr << "hyperlift: " << e.what() << "\n";
    return hyperlift::cli::kValidation;
  }
  if (*tol_opt) cfg.tol = tol;
  return hyperlift::cli::run(cfg);
}
