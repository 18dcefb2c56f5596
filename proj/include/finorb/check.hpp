#pragma once

// Independent re-verification of a certificate. Uses only the recorded
// matrices and tables plus plain matrix arithmetic; nothing from the
// pipeline (orbits, coset tables, rewriting) is re-run.

#include <string>
#include <vector>

#include "finorb/json_io.hpp"

namespace finorb {

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckReport {
  bool pass = false;
  bool byte_identical = false;
  std::vector<CheckItem> items;
  Json json;
};

/// `text` is the exact file content; it must re-serialize byte-for-byte.
CheckReport check_certificate(const std::string& text);

}  // namespace finorb
