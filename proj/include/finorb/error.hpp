#pragma once

#include <stdexcept>
#include <string>

namespace finorb {

enum class ErrorKind {
  malformed,        // ill-formed input data (zero letters, bad JSON, ...)
  out_of_range,     // generator index outside the presentation
  invalid_argument, // precondition on sizes/ranks violated
  budget,           // enumeration would exceed the configured budget
  not_central,
  not_surjective,
  not_in_subgroup,
  not_a_group,
  catalog,          // automorphism failed load-time certification
  unsupported,      // operation undefined on this input (e.g. infinite closure)
  consistency,      // an internal identity failed; never expected
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace finorb
