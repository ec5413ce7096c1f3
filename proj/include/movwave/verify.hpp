#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "movwave/geometry.hpp"
#include "movwave/parallel.hpp"

namespace movwave::verify {

// One measured quantity against its limit. Upper checks pass when
// measured <= limit, lower checks when measured >= limit; range checks use
// [limit, upper].
struct Check {
  std::string label;
  double measured = 0.0;
  double limit = 0.0;
  enum class Kind { Upper, Lower, Range } kind = Kind::Upper;
  double upper = 0.0;
  bool pass() const;
};

struct Criterion {
  int id = 0;
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;
  double runtime_limit = 0.0;  // 0 means unbounded
  std::string note;
  bool pass() const;
};

// "C4 PASS cross-solver-equivalence label=measured<=limit ... runtime=1.2s<30s".
std::string format_line(const Criterion& c);

struct Options {
  double tol_scale = 1.0;  // multiplies every numerical tolerance
  std::uint64_t seed = 20241016;
  Exec exec = Exec::Parallel;
};

struct NamedFamily {
  std::string name;
  geometry::MotionFamily family;
  bool flow = false;  // sublevel families use the looser identity tolerance
};

std::vector<NamedFamily> builtin_families();

std::vector<std::string> suite_names();

// Runs a named suite. Throws UnknownSuite.
std::vector<Criterion> run_suite(const std::string& name, const Options& options = {});

// All twelve criteria in order, sharing the expensive runs.
std::vector<Criterion> run_all(const Options& options = {});

// Runs a scenario file into `out` and checks its summary.
std::vector<Criterion> verify_scenario(const std::filesystem::path& file, const std::filesystem::path& out,
                                       const Options& options = {});

}  // namespace movwave::verify
