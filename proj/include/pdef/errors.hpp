#pragma once

#include <stdexcept>
#include <string>

namespace pdef {

/// Base for run-time failures of a filter recursion. The experiment harness
/// records these as failed runs instead of aborting.
class FilterError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Posterior mass collapsed below the normalization threshold.
class FilterDivergence : public FilterError {
public:
  explicit FilterDivergence(const std::string& what) : FilterError("filter divergence: " + what) {}
};

/// Every particle likelihood underflowed.
class WeightUnderflow : public FilterError {
public:
  explicit WeightUnderflow(const std::string& what) : FilterError("weight underflow: " + what) {}
};

/// A transported density would cross the boundary margin of its grid.
class SupportError : public FilterError {
public:
  explicit SupportError(const std::string& what) : FilterError("support error: " + what) {}
};

}  // namespace pdef
