#pragma once

#include <stdexcept>
#include <string>

namespace nsx {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  int line = 0;
  int column = 0;
  ParseError(int ln, int col, const std::string& msg)
      : Error("parse error at " + std::to_string(ln) + ":" + std::to_string(col) + ": " + msg),
        line(ln),
        column(col) {}
};

struct TypeError : Error {
  explicit TypeError(const std::string& msg) : Error("type error: " + msg) {}
};

struct UnboundVariable : Error {
  explicit UnboundVariable(const std::string& name) : Error("unbound variable: " + name) {}
};

struct FuelExhausted : Error {
  FuelExhausted() : Error("evaluation fuel exhausted") {}
};

struct IllTyped : Error {
  explicit IllTyped(const std::string& msg) : Error("ill-typed term: " + msg) {}
};

struct NotInternal : Error {
  explicit NotInternal(const std::string& msg) : Error("formula is not internal: " + msg) {}
};

struct UnknownDefinition : Error {
  explicit UnknownDefinition(const std::string& name) : Error("unknown definition: " + name) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& msg) : Error("shape error: " + msg) {}
};

struct MonotonicityUndeclared : Error {
  explicit MonotonicityUndeclared(const std::string& var)
      : Error("monotonicity undeclared for witness variable: " + var) {}
};

struct NotPure : Error {
  explicit NotPure(const std::string& msg) : Error("outside the pure fragment: " + msg) {}
};

struct UnsupportedConstruct : Error {
  explicit UnsupportedConstruct(const std::string& msg) : Error("unsupported construct: " + msg) {}
};

struct ReplayFailure : Error {
  explicit ReplayFailure(const std::string& step) : Error("replay failure at step: " + step) {}
};

struct NotClosed : Error {
  explicit NotClosed(const std::string& msg) : Error("term is not closed: " + msg) {}
};

struct NoCandidate : Error {
  explicit NoCandidate(const std::string& msg) : Error("no candidate satisfies the test: " + msg) {}
};

struct Unrepresentable : Error {
  explicit Unrepresentable(const std::string& what) : Error("not representable in structure: " + what) {}
};

struct OverflowError : Error {
  explicit OverflowError(const std::string& msg) : Error("rational overflow: " + msg) {}
};

struct NotPartition : Error {
  explicit NotPartition(const std::string& msg) : Error("not a partition: " + msg) {}
};

struct NotUniform : Error {
  explicit NotUniform(const std::string& msg) : Error("functional not uniformly continuous at this depth: " + msg) {}
};

struct DepthTooLarge : Error {
  explicit DepthTooLarge(const std::string& msg) : Error("enumeration depth too large: " + msg) {}
};

struct WindowTooSmall : Error {
  explicit WindowTooSmall(const std::string& msg) : Error("verification window too small: " + msg) {}
};

struct NoApproxRoot : Error {
  explicit NoApproxRoot(const std::string& msg) : Error("no approximate root on grid: " + msg) {}
};

struct NoZero : Error {
  explicit NoZero(const std::string& msg) : Error("no zero within bound: " + msg) {}
};

}  // namespace nsx
