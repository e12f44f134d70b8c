#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pssmp/config.hpp"
#include "pssmp/io.hpp"

namespace pssmp {

// Operations understood by run_experiment.
const std::vector<std::string>& known_ops();

struct RunResult {
  int exit_code = 0;
  Json error;                          // {code, message} on failure, null otherwise
  Json result;                         // the operation's JSON payload
  std::vector<std::string> artifacts;  // files written, relative to spec.out_dir
};

// Dispatches spec.op, writes result.<csv|json>, manifest.json and run_log.json
// into spec.out_dir. Failures return exit code 2 with error.code one of
// unknown_op, bad_params, io_error, run_failed. The manifest depends only on the
// spec and the code version; wall time goes to run_log.json.
RunResult run_experiment(const ExperimentSpec& spec);

// Computes the payload without touching the disk. The second member is the
// CSV rendering.
std::pair<Json, std::string> evaluate(const ExperimentSpec& spec);

std::string spec_hash(const ExperimentSpec& spec);
std::string code_version();

// Runs f(0..n-1) on up to `threads` workers (0: PSSMP_THREADS or the hardware
// count). Each index must write only its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f, unsigned threads = 0);

}  // namespace pssmp
