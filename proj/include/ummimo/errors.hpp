#ifndef UMMIMO_ERRORS_HPP
#define UMMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ummimo {

// Invalid arguments, malformed files, inconsistent configuration.
// The CLI maps this family to exit code 1.
class ValidationError : public std::invalid_argument {
  public:
    explicit ValidationError(const std::string &what) : std::invalid_argument(what) {}
};

// Numerical breakdown: non-convergence, NaN in a training loss, degenerate
// inputs where math requires otherwise. CLI exit code 2.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace ummimo

#endif
