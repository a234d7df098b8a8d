#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace toposkit {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a structural law (bad table, dangling reference, ...).
class MalformedInput : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its precondition (e.g. characteristic map
// of a non-mono). The message carries the counterexample.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed the configured candidate bound.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Global bound on enumerated candidates. Default 10^7.
std::uint64_t max_enum();
void set_max_enum(std::uint64_t bound);

// RAII override of max_enum(), restored on destruction.
class ScopedMaxEnum {
 public:
  explicit ScopedMaxEnum(std::uint64_t bound);
  ~ScopedMaxEnum();
  ScopedMaxEnum(const ScopedMaxEnum&) = delete;
  ScopedMaxEnum& operator=(const ScopedMaxEnum&) = delete;

 private:
  std::uint64_t saved_;
};

// Counts candidates visited by one enumeration and throws ResourceLimit when
// the count passes max_enum().
class Budget {
 public:
  explicit Budget(std::string what);

  void tick(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > limit_) fail();
  }
  // Throws if `estimate` candidates would not fit in the remaining budget.
  void require(double estimate) const;
  std::uint64_t used() const { return used_; }

 private:
  [[noreturn]] void fail() const;

  std::string what_;
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

}  // namespace toposkit
