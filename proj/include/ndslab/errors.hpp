#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ndslab {

enum class ErrorKind {
  invalid_argument,
  non_convergence,
  radius_too_large,
  precond_violated,
  cell_blowup,
  non_positive_density,
  kappa_too_large,
  non_monotone,
  degree_mismatch,
  no_convergence,
  depth_insufficient,
  hypothesis_violated,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. Validation-type kinds signal bad
/// inputs; the rest are numeric failures discovered while computing.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }
  bool is_validation() const noexcept;

  /// Optional diagnostic trace (e.g. residual history of a failed solve).
  const std::vector<double>& trace() const noexcept { return trace_; }
  Error&& with_trace(std::vector<double> trace) &&;

 private:
  ErrorKind kind_;
  std::vector<double> trace_;
};

/// Throws `invalid_argument` with `message` unless `condition` holds.
void require(bool condition, const std::string& message);

}  // namespace ndslab
