#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "experiment.hpp"

namespace oscbus::runner {

enum class Format { csv, json };

Format format_from_string(const std::string& name);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view data);

/// Header row plus one row per sample, %.15g, LF line ends.
std::string series_csv(const Series& series);

/// Columns as arrays of values rounded to 15 significant digits.
nlohmann::ordered_json series_json(const Series& series);

struct FileDigest {
  std::string name;
  std::string sha256;
  size_t bytes = 0;
};

/// Manifest without the per-run fields (wall time, file list); stable
/// for a given config and engine version.
nlohmann::ordered_json manifest_core(const ExperimentResult& result);

struct RunSummary {
  std::filesystem::path directory;
  std::vector<FileDigest> files;
  std::vector<std::string> warnings;
};

/// Writes the data files and manifest.json into `dir` (created if needed).
RunSummary write_outputs(const ExperimentResult& result, const std::filesystem::path& dir,
                         Format format, double wall_seconds);

/// run_experiment + write_outputs with wall-clock timing.
RunSummary run_to_directory(const ExperimentConfig& config, const std::filesystem::path& dir,
                            Format format);

}  // namespace oscbus::runner
