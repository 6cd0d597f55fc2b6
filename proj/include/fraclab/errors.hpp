#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fraclab {

/// Input outside the domain where a formula or operator is defined.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Parameter outside the range supported by a numerical routine.
class RangeError : public std::range_error {
public:
  using std::range_error::range_error;
};

/// A quadrature was cut off while the discarded tail was still significant.
class TruncationError : public std::runtime_error {
public:
  TruncationError(const std::string& what, double estimate)
      : std::runtime_error(what + " (tail estimate " + format(estimate) + ")"), estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

  double estimate_;
};

/// Two evaluation routes of the same quantity disagree.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Malformed configuration (unknown key, missing key, unparsable value).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace fraclab
