#pragma once

#include <stdexcept>
#include <string>

namespace fuzzctl {

// Base for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed controller definition: unresolved names, bad shapes, empty rule base.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Defuzzification was asked to collapse an output where nothing fired.
class NoRuleFired : public Error {
 public:
  NoRuleFired() : Error("no rule fired") {}
  explicit NoRuleFired(const std::string& what) : Error(what) {}
};

// Bad runtime data (sensor series, crisp values).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace fuzzctl
