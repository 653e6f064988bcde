#pragma once

#include <stdexcept>
#include <string>

namespace vmont {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad modulus or parameter combination handed to precomputation.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// A gather strategy was requested on a target that cannot execute it.
class UnsupportedStrategy : public Error {
 public:
  using Error::Error;
};

/// Two IR types with no unification rule.
class UnificationError : public Error {
 public:
  using Error::Error;
};

/// Ill-typed or ill-scoped IR.
class TypeError : public Error {
 public:
  using Error::Error;
};

/// Rewrite rule applied to an expression it does not match.
class PatternMismatch : public Error {
 public:
  using Error::Error;
};

class NotImplemented : public Error {
 public:
  using Error::Error;
};

/// Malformed or invariant-violating ISA descriptor.
class IsaError : public Error {
 public:
  using Error::Error;
};

class InterpretError : public Error {
 public:
  using Error::Error;
};

/// The unparser met a construct it has no emission for.
class EmitError : public Error {
 public:
  using Error::Error;
};

}  // namespace vmont
