#ifndef CONEMIN_ERRORS_HPP
#define CONEMIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace conemin {

// Domain violations (vertex evaluation, angles outside the working strip, ...)
// are reported with std::domain_error; violated preconditions on arguments
// with std::invalid_argument. Only failures of a numerical procedure use
// numeric_error, which keeps the residual the procedure could not get rid of.
class numeric_error : public std::runtime_error {
public:
  numeric_error(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace conemin

#endif // CONEMIN_ERRORS_HPP
