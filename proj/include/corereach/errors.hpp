#pragma once

#include <stdexcept>
#include <string>

namespace corereach {

/// Projection or feasibility was requested on an empty constraint set.
struct empty_set_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative solver hit its iteration cap without meeting its exit test.
struct nonconvergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A runtime assumption monitor tripped (e.g. innovation norm bound).
struct monitor_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller-supplied generator violated its contract.
struct contract_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration parsing or validation failed; `path` points at the JSON field.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& json_path, const std::string& what)
      : std::runtime_error(json_path + ": " + what), path(json_path) {}
  std::string path;
};

}  // namespace corereach
