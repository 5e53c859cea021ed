#pragma once

#include <stdexcept>
#include <string>

namespace legendre {

// Bad caller input: wrong parameters, non-coprime (q, d), non-prime p, ...
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured resource limit (field size cap, place budget) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical identity that must hold did not; always signals a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Operation undefined at this input (inverse of zero, valuation of zero).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Working p-adic precision was exhausted; retry with a larger precision.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace legendre
