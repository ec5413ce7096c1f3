#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "movwave/error.hpp"
#include "movwave/griffith.hpp"
#include "movwave/runner.hpp"
#include "movwave/scenario.hpp"
#include "movwave/verify.hpp"

namespace fs = std::filesystem;
using namespace movwave;

namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumerical = 3;

int report(const std::vector<verify::Criterion>& results, const fs::path& out) {
  bool ok = true;
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& c : results) {
    std::cout << verify::format_line(c) << '\n';
    ok = ok && c.pass();
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& ch : c.checks)
      checks.push_back({{"label", ch.label}, {"measured", ch.measured}, {"limit", ch.limit}, {"pass", ch.pass()}});
    doc.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass()}, {"seconds", c.seconds}, {"checks", checks}});
  }
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream(out / "verify.json") << doc.dump(2) << '\n';
  }
  std::cout << (ok ? "verification passed" : "verification FAILED") << '\n';
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave equation on moving domains: scenarios, energy ledgers and debonding fronts"};
  app.require_subcommand(1);
  std::string out;
  double tol_scale = 1.0;
  std::uint64_t seed = verify::Options{}.seed;
  app.add_option("--out", out, "Output directory");
  app.add_option("--tol-scale", tol_scale, "Multiplier applied to verification tolerances")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for randomized property suites");

  std::string file, target, dir;
  auto* validate = app.add_subcommand("validate", "Parse a scenario and echo its canonical form");
  validate->add_option("file", file, "Scenario file")->required();
  auto* run = app.add_subcommand("run", "Run a scenario and write CSVs plus manifest.json");
  run->add_option("file", file, "Scenario file")->required();
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite or check a scenario file");
  verify_cmd->add_option("target", target, "Suite name (identities, transform-equivalence, energy, griffith, "
                                           "coupled-1d, coupled-radial, all) or scenario file")
      ->required();
  auto* sweep = app.add_subcommand("sweep", "Run every .scn file of a directory in parallel");
  sweep->add_option("dir", dir, "Directory of scenario files")->required();
  for (auto* sub : {validate, run, verify_cmd, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  verify::Options vopt;
  vopt.tol_scale = tol_scale;
  vopt.seed = seed;

  try {
    if (*validate) {
      const Scenario sc = parse_scenario(file);
      std::cout << "# " << file << " is valid";
      if (sc.compatibility) std::cout << " (" << griffith::compatibility_name(*sc.compatibility) << ")";
      std::cout << '\n' << sc.to_text();
      return kOk;
    }
    if (*run) {
      const Scenario sc = parse_scenario(file);
      const auto art = runner::run(sc, out);
      std::cout << "wrote " << art.directory.string() << ':';
      for (const auto& f : art.files) std::cout << ' ' << f;
      std::cout << " manifest.json\n";
      for (const auto& [k, v] : art.summary) std::cout << "  " << k << " = " << runner::format_number(v) << '\n';
      return kOk;
    }
    if (*verify_cmd) {
      if (target == "all") return report(verify::run_all(vopt), out);
      if (fs::is_regular_file(target)) return report(verify::verify_scenario(target, out, vopt), out);
      return report(verify::run_suite(target, vopt), out);
    }
    if (*sweep) {
      const auto entries = runner::sweep(dir, out.empty() ? fs::path("sweep-out") : fs::path(out));
      int status = kOk;
      for (const auto& e : entries) {
        std::cout << (e.status == 0 ? "ok   " : "fail ") << e.scenario.string() << " -> " << e.directory.string();
        if (e.status != 0) std::cout << ": " << e.message;
        std::cout << '\n';
        status = std::max(status, e.status);
      }
      return status;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return is_input_error(e.code()) ? kUsage : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
