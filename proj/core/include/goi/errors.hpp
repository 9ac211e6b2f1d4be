#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "goi/nat.hpp"

namespace goi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Duplicate input or output in a finite map.
class InjectivityError : public Error {
 public:
  InjectivityError(Nat input, Nat output, const std::string& what);
  const Nat& input() const { return input_; }
  const Nat& output() const { return output_; }

 private:
  Nat input_;
  Nat output_;
};

// Two rules of a prefix map with intersecting input or output classes.
class OverlapError : public Error {
 public:
  OverlapError(std::size_t first, std::size_t second, const std::string& what);
  std::size_t first_rule() const { return first_; }
  std::size_t second_rule() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

// The union of two maps is not a partial injection. The witness is a point
// where the operands disagree (or, for a range clash, the input whose image
// collides with the other operand's range).
class CompatibilityError : public Error {
 public:
  explicit CompatibilityError(Nat witness, const std::string& detail = {});
  const Nat& witness() const { return witness_; }

 private:
  Nat witness_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(Nat input, std::size_t budget);
  const Nat& input() const { return input_; }
  std::size_t budget() const { return budget_; }

 private:
  Nat input_;
  std::size_t budget_;
};

// A candidate self-similar structure whose second injection strips forever
// from some point below the checked bound.
class NoResidueError : public Error {
 public:
  explicit NoResidueError(Nat witness);
  const Nat& witness() const { return witness_; }

 private:
  Nat witness_;
};

class UnknownLawError : public Error {
 public:
  explicit UnknownLawError(const std::string& name);
};

}  // namespace goi
