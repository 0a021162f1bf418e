#pragma once

#include <stdexcept>
#include <string>

namespace mindevo {

/// Transport or backend-side failure. Distinct from a reply that merely
/// fails to parse.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input rejected by a size bound (brute-force oracles) or a domain range.
class RefusedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownModelError : public std::runtime_error {
 public:
  explicit UnknownModelError(const std::string& model)
      : std::runtime_error("unknown model in price table: " + model), model_(model) {}
  const std::string& model() const { return model_; }

 private:
  std::string model_;
};

/// Malformed configuration, instance file, or corpus.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mindevo
