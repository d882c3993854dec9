#pragma once

#include <stdexcept>
#include <string>

namespace ebmc {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// county lake lists fail to partition the lake set
struct PartitionViolation : Error {
  using Error::Error;
};

// structurally invalid instance data (bad ids, duplicate arcs, budget out of range, ...)
struct InvalidInstance : Error {
  using Error::Error;
};

// malformed instance file or CSV input
struct FormatError : Error {
  using Error::Error;
};

// generator parameters outside their documented ranges
struct InvalidParams : Error {
  using Error::Error;
};

// inconsistent optimization model (free/fixed sets overlap or miss lakes, ...)
struct InvalidModel : Error {
  using Error::Error;
};

// enumeration would exceed the configured profile cap
struct TooLarge : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace ebmc
