#ifndef SRE_ERROR_H
#define SRE_ERROR_H

#include <stdexcept>
#include <string>

namespace sre {

enum class ErrorKind {
  kShape,          // dimension mismatch between objects
  kValidation,     // malformed input or violated axiom
  kNumerical,      // solver breakdown or non-convergence
  kNoEquilibrium,  // a search finished without a verified equilibrium
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ShapeError(const std::string& what) {
  return Error(ErrorKind::kShape, "shape error: " + what);
}

inline Error ValidationError(const std::string& what) {
  return Error(ErrorKind::kValidation, "validation error: " + what);
}

inline Error NumericalError(const std::string& what) {
  return Error(ErrorKind::kNumerical, "numerical error: " + what);
}

}  // namespace sre

#endif  // SRE_ERROR_H
