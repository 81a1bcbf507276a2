#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "covert/sca.hpp"

namespace covert {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitValidation = 2,
  kExitSolver = 3,
  kExitVerification = 4,
};

int exit_code_for(const std::exception& e);
/// {"error": kind, "message": text} on one line.
std::string error_json(const std::exception& e);

/// `config` is a scenario file or the name scenario1/scenario2.
int cmd_solve(const std::string& config, AntennaMode mode, Benchmark bench,
              const std::filesystem::path& out_dir, std::uint64_t seed, std::ostream& err);
/// parallelism <= 0 uses min(cells, hardware threads).
int cmd_sweep(const std::filesystem::path& spec_path, const std::filesystem::path& out_dir, int parallelism,
              std::ostream& err);
int cmd_verify(const std::filesystem::path& out_dir, long trials, std::uint64_t seed, int parallelism,
               std::ostream& err);
/// Both built-in scenarios as one JSON document.
std::string cmd_defaults();

}  // namespace covert
