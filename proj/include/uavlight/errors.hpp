#pragma once

#include <stdexcept>
#include <string>

namespace uavlight {

// Input violated a schema rule or a model invariant.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed text input. Carries a 1-based line number when one is known.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg), line_(0) {}
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// The request cannot be satisfied with the given constraints.
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// More clusters than drones.
class FleetExhaustedError : public InfeasibleError {
public:
  explicit FleetExhaustedError(const std::string& msg) : InfeasibleError(msg) {}
};

// A battery handover is needed but no idle drone is left.
class NoReliefError : public InfeasibleError {
public:
  explicit NoReliefError(const std::string& msg) : InfeasibleError(msg) {}
};

// Network-level failure: discovery timeout, socket error, retry exhaustion.
class LinkError : public std::runtime_error {
public:
  explicit LinkError(const std::string& msg) : std::runtime_error(msg) {}
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace uavlight
