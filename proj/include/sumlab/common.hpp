#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace sumlab {

using Int = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::uint64_t kDefaultBitBudget = std::uint64_t{1} << 28;

// Requested bitmap or search space exceeds the configured budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact search refused because the instance exceeds its size guard.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A lemma's hypotheses do not hold for the given input.
class HypothesisError : public std::runtime_error {
 public:
  HypothesisError(std::string clause, const std::string& what)
      : std::runtime_error(what), clause_(std::move(clause)) {}
  const std::string& clause() const { return clause_; }

 private:
  std::string clause_;
};

class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(std::size_t index, Int slack, const std::string& what)
      : std::runtime_error(what), index_(index), slack_(slack) {}
  std::size_t index() const { return index_; }
  // Amount by which the offending element exceeds what is allowed.
  Int slack() const { return slack_; }

 private:
  std::size_t index_;
  Int slack_;
};

// Requested verification mode cannot run within budget.
class ModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The distribution to sample from is empty.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(const Rational& q);
double to_double(const Rational& q);
double log_big(const BigInt& v);

}  // namespace sumlab
