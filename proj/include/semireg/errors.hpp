#pragma once

#include <stdexcept>
#include <string>

namespace semireg {

// Operands live in rings with different numbers of variables, or an index
// falls outside the graded component it addresses.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Adding two nonzero homogeneous elements of different degree.
class GradingError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Input outside an operation's domain (wrong degree, zero generator, ...).
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A computation would exceed the configured memory / population budget.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A closed-form result was requested outside the range where it is valid.
class InapplicableError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// A search ran out of horizon before finding its witness. The caller may
// retry with a larger horizon or limit.
class InconclusiveError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A certificate input violates its preconditions (e.g. slope <= 1/2).
class CertificateError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace semireg
