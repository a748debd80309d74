#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace oscbus::runner {

struct SweepSpec {
  std::string key;
  std::vector<std::string> values;
};

/// Parses `KEY=v1,v2,…`; commas inside brackets or quotes do not split.
SweepSpec parse_sweep(const std::string& arg);

struct SweepPoint {
  std::string value;
  std::filesystem::path directory;
  ExperimentConfig config;
};

/// Expands every point up front so config errors surface before any run.
std::vector<SweepPoint> plan_sweep(const Document& doc, const std::string& preset_override,
                                   const SweepSpec& sweep, const std::filesystem::path& out);

/// OSCBUS_THREADS if set and positive, else the hardware concurrency.
int sweep_threads();

/// Runs the points on up to `threads` workers; each point writes only to
/// its own directory. Rethrows the first failure after all workers stop.
std::vector<RunSummary> run_sweep(const std::vector<SweepPoint>& points, Format format,
                                  int threads);

}  // namespace oscbus::runner
