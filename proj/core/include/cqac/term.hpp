#pragma once

#include <string>
#include <tuple>

#include "cqac/rational.hpp"

namespace cqac {

// A term of a query or comparison: a variable (uppercase-leading name) or a
// rational constant.
struct Term {
  bool is_var = false;
  std::string var;   // valid iff is_var
  Rational val;      // valid iff !is_var

  static Term variable(std::string name) {
    Term t;
    t.is_var = true;
    t.var = std::move(name);
    return t;
  }
  static Term constant(Rational v) {
    Term t;
    t.is_var = false;
    t.val = v;
    return t;
  }

  std::string str() const { return is_var ? var : val.str(); }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.is_var != b.is_var) return false;
    return a.is_var ? a.var == b.var : a.val == b.val;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  // Variables order before constants; gives comparisons a stable canonical
  // orientation.
  friend bool operator<(const Term& a, const Term& b) {
    if (a.is_var != b.is_var) return a.is_var;
    if (a.is_var) return a.var < b.var;
    return a.val < b.val;
  }
};

}  // namespace cqac
