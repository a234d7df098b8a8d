#include "toposkit/error.hpp"

#include <atomic>

namespace toposkit {

namespace {
std::atomic<std::uint64_t> g_max_enum{10'000'000};
}

std::uint64_t max_enum() { return g_max_enum.load(std::memory_order_relaxed); }

void set_max_enum(std::uint64_t bound) {
  g_max_enum.store(bound, std::memory_order_relaxed);
}

ScopedMaxEnum::ScopedMaxEnum(std::uint64_t bound) : saved_(max_enum()) {
  set_max_enum(bound);
}

ScopedMaxEnum::~ScopedMaxEnum() { set_max_enum(saved_); }

Budget::Budget(std::string what) : what_(std::move(what)), limit_(max_enum()) {}

void Budget::require(double estimate) const {
  if (estimate > static_cast<double>(limit_ - used_)) {
    throw ResourceLimit(what_ + ": about " + std::to_string(estimate) +
                        " candidates exceed the enumeration bound " +
                        std::to_string(limit_));
  }
}

void Budget::fail() const {
  throw ResourceLimit(what_ + ": enumeration bound " + std::to_string(limit_) +
                      " exceeded");
}

}  // namespace toposkit
