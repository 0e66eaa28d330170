#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netdist {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax or semantic problem in an eNewick line. `offset` is a byte offset
// into the line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InvalidOpError : public Error {
 public:
  using Error::Error;
};

class TaxaMismatchError : public Error {
 public:
  TaxaMismatchError() : Error("networks are defined on different taxa") {}
};

// Search ran out of its state budget. `lower_bound` is the depth that was
// fully explored without finding the target.
class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, int lower_bound)
      : Error(what), lower_bound_(lower_bound) {}
  int lower_bound() const { return lower_bound_; }

 private:
  int lower_bound_;
};

// A constructive builder reached a state its case analysis does not cover.
class InternalInvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace netdist
