#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isoposet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NotAPartialIsometry : public Error {
public:
  NotAPartialIsometry(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class NotTotallyOrdered : public Error {
public:
  NotTotallyOrdered(const std::string& what, std::size_t first, std::size_t second)
      : Error(what), first_(first), second_(second) {}
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

private:
  std::size_t first_;
  std::size_t second_;
};

/// Raised by chain construction; carries the input indices of the offending pair.
class IncomparablePair : public NotTotallyOrdered {
public:
  using NotTotallyOrdered::NotTotallyOrdered;
};

class NoUpperBoundProvided : public Error {
public:
  using Error::Error;
};

class NotAnUpperBound : public Error {
public:
  using Error::Error;
};

class PreconditionViolated : public Error {
public:
  using Error::Error;
};

class NonConvergence : public Error {
public:
  using Error::Error;
};

class NotAMember : public Error {
public:
  using Error::Error;
};

class HypothesisViolated : public Error {
public:
  using Error::Error;
};

class Infeasible : public Error {
public:
  using Error::Error;
};

class BadZeroRequest : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class UnknownCommand : public Error {
public:
  using Error::Error;
};

class UsageError : public Error {
public:
  using Error::Error;
};

}  // namespace isoposet
