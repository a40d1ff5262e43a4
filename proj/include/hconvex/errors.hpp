#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hconvex {

// Malformed expression text. offset is a byte offset into the source.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
      : std::runtime_error(what), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// A function was evaluated outside its domain (log of a nonpositive number,
// division by zero, negative base with fractional exponent, overflow).
class DomainError : public std::runtime_error {
public:
  DomainError(std::string subexpr, double t, const std::string& what)
      : std::runtime_error(what), subexpr_(std::move(subexpr)), t_(t) {}

  const std::string& subexpr() const noexcept { return subexpr_; }
  double t() const noexcept { return t_; }

private:
  std::string subexpr_;
  double t_;
};

class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// h_k(t) = t^k with k <= -1 or k == 0 has no geometric h-chord meaning.
class CautionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Report files could not be written; the message names the path.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hconvex
