// warpcheck: batch verification of warped-product inequalities from scene files.
//
//   warpcheck verify <scene> [--tol-algebraic R] [--tol-fd R] [--samples N]
//                            [--seed S] [--output json|text] [--out path]
//   warpcheck echo <scene>
//   warpcheck catalog
//
// Exit status: 0 all checks pass, 1 a check failed, 2 invalid input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "warpcheck/scene.hpp"

namespace {

constexpr int kInvalidInput = 2;

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("WARPCHECK_SEED");
  if (!raw || !*raw) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw warpcheck::Error(warpcheck::ErrorKind::validation,
                           std::string("WARPCHECK_SEED is not an unsigned integer: ") + raw);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of warped-product immersion inequalities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(warpcheck::version));

  std::string scene_path;
  std::optional<double> tol_alg, tol_fd;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::string output = "json";
  std::string out_path;

  CLI::App* verify = app.add_subcommand("verify", "Run the checks of a scene file");
  verify->add_option("scene", scene_path, "Scene file (JSON)")->required();
  verify->add_option("--tol-algebraic", tol_alg, "Algebraic tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--tol-fd", tol_fd, "Finite-difference tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Seed (falls back to the scene, then WARPCHECK_SEED)");
  verify->add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--out", out_path, "Write the report here instead of stdout");

  CLI::App* echo = app.add_subcommand("echo", "Print the canonical form of a scene file");
  echo->add_option("scene", scene_path, "Scene file (JSON)")->required();

  app.add_subcommand("catalog", "List named ambients, immersions, charts and checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidInput;
  }

  try {
    if (app.got_subcommand("catalog")) {
      std::cout << warpcheck::catalog_text();
      return 0;
    }
    const warpcheck::SceneSpec spec = warpcheck::parse_scene(scene_path);
    if (app.got_subcommand("echo")) {
      std::cout << warpcheck::scene_to_json(spec);
      return 0;
    }

    warpcheck::RunOptions opts;
    if (tol_alg || tol_fd) {
      warpcheck::Tolerance t;
      if (spec.tol_algebraic) t.algebraic = *spec.tol_algebraic;
      if (spec.tol_finite_difference) t.finite_difference = *spec.tol_finite_difference;
      if (spec.tol_equality_gap) t.equality_gap = *spec.tol_equality_gap;
      if (tol_alg) t.algebraic = *tol_alg;
      if (tol_fd) t.finite_difference = *tol_fd;
      opts.tolerance = t;
    }
    opts.samples = samples;
    opts.seed = seed;
    if (!opts.seed && !spec.seed) opts.seed = env_seed();

    const warpcheck::RunReport report = warpcheck::run(spec, opts);
    const auto fmt = output == "text" ? warpcheck::OutputFormat::text : warpcheck::OutputFormat::json;
    const std::string body = warpcheck::emit(report, fmt);
    if (out_path.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return kInvalidInput;
      }
      out << body;
    }
    return report.exit_code();
  } catch (const warpcheck::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}
