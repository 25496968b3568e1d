#pragma once

#include <stdexcept>
#include <string>

namespace fractalmra {

enum class ErrorKind {
  InvalidDigit,     // digit outside [0, N-1], duplicate digits, empty set
  Precondition,     // operation-specific precondition violated
  CapExceeded,      // configured size/depth cap exceeded
  Range,            // integer overflow or out-of-range argument
  ScaleMismatch,    // operands built over different scales or systems
  NotNormalized,    // R_{m0} 1 != 1
  Coarsening,       // lattice vector asked to move to a lower resolution
  MissingMoments,   // moment table does not cover a requested index
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace fractalmra
