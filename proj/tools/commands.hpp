#pragma once

#include "config.hpp"
#include "output.hpp"

namespace arrival::cli {

Table cmd_distribution(const RunConfig& cfg);
// Table carries the checks; `all_passed` reports the suite outcome.
Table cmd_verify(const RunConfig& cfg, bool& all_passed);
Table cmd_measure(const RunConfig& cfg);
Table cmd_spectrum(const RunConfig& cfg);
Table cmd_classical(const RunConfig& cfg);

// Full command-line entry point; returns the process exit code
// (0 ok, 1 verification failure, 2 config error, 3 numeric failure).
int run_cli(int argc, char** argv);

}  // namespace arrival::cli
