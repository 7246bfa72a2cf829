#pragma once

#include "config.hpp"
#include "report.hpp"

namespace softphoton::cli {

// Runs the configured experiment.  Physical preconditions are expected to have
// been checked with Config::diagnostics(); anything the core still rejects
// surfaces as NumericalError annotated with the offending parameters.
Report run_experiment(const Config& cfg);

// The validate experiment: one row per diagnostic.
Report validation_report(const Config& cfg, const std::vector<std::string>& diagnostics);

}  // namespace softphoton::cli
