#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "movwave/parallel.hpp"
#include "movwave/scenario.hpp"

namespace movwave::runner {

inline constexpr const char* kCodeVersion = "movwave 0.1.0";

struct RunArtifacts {
  std::filesystem::path directory;
  std::string manifest;            // contents of manifest.json
  std::vector<std::string> files;  // written files, relative to directory
  std::vector<std::pair<std::string, double>> summary;
};

// Formats with 17 significant digits.
std::string format_number(double v);

// Executes the scenario and writes manifest.json plus the selected CSVs into
// `directory` (the scenario's output.directory when empty). Module errors are
// rethrown with the failing stage prefixed to the message.
RunArtifacts run(const Scenario& sc, const std::filesystem::path& directory = {}, Exec exec = Exec::Parallel);

struct SweepEntry {
  std::filesystem::path scenario;
  std::filesystem::path directory;
  int status = 0;  // CLI exit code for this scenario
  std::string message;
};

// Runs every *.scn file of `dir` (sorted by name) into out/<stem>, in parallel
// across scenarios with serial kernels inside each run.
std::vector<SweepEntry> sweep(const std::filesystem::path& dir, const std::filesystem::path& out,
                              Exec exec = Exec::Parallel);

}  // namespace movwave::runner
