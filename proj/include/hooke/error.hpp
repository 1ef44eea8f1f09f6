#pragma once

#include <stdexcept>
#include <string>

namespace hooke {

// Precondition violated by the caller (bad grid, wrong sizes, out-of-range indices).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computed value left the representable range.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Shooting could not bracket the requested eigenvalue.
class NoBracket : public std::runtime_error {
 public:
  NoBracket(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

}  // namespace hooke
