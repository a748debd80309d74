#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace oscbus::runner {

namespace {

std::string directory_name(const std::string& key, const std::string& value) {
  std::string out = key + "=" + value;
  for (char& c : out) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ||
                      c == '-' || c == '=';
    if (!keep) c = '_';
  }
  return out;
}

}  // namespace

SweepSpec parse_sweep(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--sweep expects KEY=v1,v2,..., got '" + arg + "'");
  }
  SweepSpec out;
  out.key = arg.substr(0, eq);
  std::string current;
  int depth = 0;
  bool quoted = false;
  for (char c : arg.substr(eq + 1)) {
    if (c == '"') quoted = !quoted;
    if (!quoted && c == '[') ++depth;
    if (!quoted && c == ']') --depth;
    if (c == ',' && depth == 0 && !quoted) {
      out.values.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  out.values.push_back(current);
  for (const auto& v : out.values) {
    if (v.empty()) throw ConfigError("--sweep " + out.key + ": empty value");
  }
  return out;
}

std::vector<SweepPoint> plan_sweep(const Document& doc, const std::string& preset_override,
                                   const SweepSpec& sweep, const std::filesystem::path& out) {
  std::vector<SweepPoint> points;
  for (const auto& value : sweep.values) {
    Document point = doc;
    set_document_value(point, sweep.key, value);
    SweepPoint p;
    p.value = value;
    p.directory = out / directory_name(sweep.key, value);
    try {
      p.config = config_from_document(std::move(point), preset_override);
    } catch (const ConfigError& e) {
      throw ConfigError("sweep point " + sweep.key + "=" + value + ": " + e.what());
    }
    points.push_back(std::move(p));
  }
  return points;
}

int sweep_threads() {
  if (const char* env = std::getenv("OSCBUS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunSummary> run_sweep(const std::vector<SweepPoint>& points, Format format,
                                  int threads) {
  std::vector<RunSummary> summaries(points.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      try {
        summaries[i] = run_to_directory(points[i].config, points[i].directory, format);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next = points.size();
      }
    }
  };
  const int count = std::clamp(threads, 1, static_cast<int>(std::max<size_t>(1, points.size())));
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return summaries;
}

}  // namespace oscbus::runner
