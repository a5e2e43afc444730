#pragma once

#include <stdexcept>
#include <string>

namespace cqac {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        line(line_), col(col_) {}
};

// A decision procedure was asked to run outside its fragment.
struct FragmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input exceeds the configured desk-scale bound for exhaustive enumeration.
struct ScaleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Desk-scale bound for canonical-database enumeration (number of variables
// plus relevant constants).  Defaults to 8; the CQAC_SCALE_BOUND environment
// variable overrides it.
int scale_bound();

}  // namespace cqac
