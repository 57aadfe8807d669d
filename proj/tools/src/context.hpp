#pragma once

#include <garchmom/distribution.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <exception>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace garchmom::cli {

using json = nlohmann::ordered_json;

/// Per-invocation state handed to a command's action.
struct Session {
  std::ostream& out;
  std::ostream& err;
  bool json_output = false;
  unsigned threads = 0;
  json inputs = json::object();
  json results = json::object();
  std::vector<std::string> warnings;
  /// Raised after the output has been flushed.
  std::exception_ptr deferred;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

using Action = std::function<void(Session&)>;

struct CommonFlags {
  bool json_output = false;
  unsigned threads = 0;
};

/// Distribution selection shared by region, fit, rolling and simulate.
struct DistFlags {
  bool normal = false;
  bool mixture = false;
  bool allow_boundary = false;
  std::string dist;
  double eta4 = 0.0;
  double eta6 = 0.0;
  CLI::Option* eta4_opt = nullptr;
  CLI::Option* eta6_opt = nullptr;
  CLI::Option* dist_opt = nullptr;
};

void add_common_flags(CLI::App& sub, CommonFlags& flags);
void add_dist_flags(CLI::App& sub, DistFlags& flags);

/// Applies the selection rules and records the choice in `inputs`. Throws
/// std::invalid_argument on inconsistent flags.
ConditionalDistribution resolve_distribution(const DistFlags& flags, json& inputs);

/// Finite doubles as numbers, everything else as null.
json number(double value);

/// Writes to `path` when non-empty, else to `fallback`.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback);
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

struct Registered {
  CLI::App* sub;
  std::shared_ptr<CommonFlags> common;
  Action action;
};

Registered register_moments(CLI::App& app);
Registered register_region(CLI::App& app);
Registered register_fit(CLI::App& app);
Registered register_rolling(CLI::App& app);
Registered register_simulate(CLI::App& app);

}  // namespace garchmom::cli
