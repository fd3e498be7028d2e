#pragma once

#include <stdexcept>
#include <string>

namespace twcr {

// Argument outside the mathematical domain of a function (bad order, bad
// quantum number).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Invalid or unsupported configuration. `path` names the offending field
// (e.g. "beam.energy_mev") when one is known.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg, std::string path = {})
        : std::runtime_error(path.empty() ? msg : path + ": " + msg), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
};

// A numerical procedure failed to converge.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace twcr
