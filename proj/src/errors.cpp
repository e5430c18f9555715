#include "ndslab/errors.hpp"

namespace ndslab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::non_convergence: return "NonConvergence";
    case ErrorKind::radius_too_large: return "RadiusTooLarge";
    case ErrorKind::precond_violated: return "PrecondViolated";
    case ErrorKind::cell_blowup: return "CellBlowup";
    case ErrorKind::non_positive_density: return "NonPositiveDensity";
    case ErrorKind::kappa_too_large: return "KappaTooLarge";
    case ErrorKind::non_monotone: return "NonMonotone";
    case ErrorKind::degree_mismatch: return "DegreeMismatch";
    case ErrorKind::no_convergence: return "NoConvergence";
    case ErrorKind::depth_insufficient: return "DepthInsufficient";
    case ErrorKind::hypothesis_violated: return "HypothesisViolated";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

bool Error::is_validation() const noexcept {
  switch (kind_) {
    case ErrorKind::invalid_argument:
    case ErrorKind::radius_too_large:
    case ErrorKind::precond_violated:
    case ErrorKind::kappa_too_large:
    case ErrorKind::non_positive_density:
      return true;
    default:
      return false;
  }
}

Error&& Error::with_trace(std::vector<double> trace) && {
  trace_ = std::move(trace);
  return std::move(*this);
}

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::invalid_argument, message);
}

}  // namespace ndslab
