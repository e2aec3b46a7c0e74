#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cssmin {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string out;
};

// Runs argv[0] (searched in PATH) with stdout captured; stderr is discarded.  Setting
// *cancel kills the child as if it had timed out.
ProcessResult run_process(const std::vector<std::string>& argv, double timeout_s,
                          const std::atomic<bool>* cancel = nullptr);

// Writes `content` to a fresh temporary file and returns its path.
std::string write_temp_file(const std::string& content, const std::string& suffix);

// Stable 64-bit FNV-1a, used for file names and cache keys.
uint64_t fnv1a(const std::string& s);
std::string hex64(uint64_t v);

struct SmtConfig {
  std::string binary = "z3";
  double timeout_s = 60;
  std::string emit_dir;  // when set, every query is written there as <hash>.smt2
};

enum class SatResult { Sat, Unsat, Unknown };

struct SmtAnswer {
  SatResult result = SatResult::Unknown;
  std::map<std::string, long> model;  // Int and Bool (0/1) values
  std::string error;
};

// One solver process per query; answers are cached by script text.
SmtAnswer solve_smt(const std::string& script, const SmtConfig& cfg);

struct SolverStats {
  long queries = 0;
  long cache_hits = 0;
  long failures = 0;
};
SolverStats smt_stats();

}  // namespace cssmin
