#pragma once

#include <stdexcept>
#include <string>

namespace cubiclines {

// Not enough meaningful p-adic digits left to decide a result.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operands living in different quadratic extensions.
class DescriptorMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotSquarefree : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A refinement search ran past its depth bound or candidate budget.
class DepthExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NotInGeneralPosition : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ZeroReduction : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The accepted line set is not that of a smooth cubic surface.
class SingularSurface : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonAdmissibleCount : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cubiclines
