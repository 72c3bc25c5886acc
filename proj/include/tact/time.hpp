#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace tact {

/// Discrete model time. Finite values are nonnegative tick counts; the
/// distinguished infinity is only legal as a message deadline.
class TimeValue {
 public:
  constexpr TimeValue() : ticks_(0) {}
  constexpr explicit TimeValue(std::int64_t ticks) : ticks_(ticks) {}

  static constexpr TimeValue infinity() { return TimeValue(kInf); }
  static constexpr TimeValue zero() { return TimeValue(0); }

  constexpr bool is_infinite() const { return ticks_ == kInf; }
  constexpr std::int64_t ticks() const { return ticks_; }

  /// Shift by a (possibly negative) offset; infinity absorbs.
  constexpr TimeValue shifted(std::int64_t delta) const {
    return is_infinite() ? *this : TimeValue(ticks_ + delta);
  }

  constexpr TimeValue operator+(std::int64_t d) const { return shifted(d); }

  friend constexpr bool operator==(TimeValue a, TimeValue b) { return a.ticks_ == b.ticks_; }
  friend constexpr bool operator!=(TimeValue a, TimeValue b) { return a.ticks_ != b.ticks_; }
  friend constexpr bool operator<(TimeValue a, TimeValue b) { return a.ticks_ < b.ticks_; }
  friend constexpr bool operator<=(TimeValue a, TimeValue b) { return a.ticks_ <= b.ticks_; }
  friend constexpr bool operator>(TimeValue a, TimeValue b) { return a.ticks_ > b.ticks_; }
  friend constexpr bool operator>=(TimeValue a, TimeValue b) { return a.ticks_ >= b.ticks_; }

  std::string str() const { return is_infinite() ? "inf" : std::to_string(ticks_); }

 private:
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  std::int64_t ticks_;
};

inline TimeValue max(TimeValue a, TimeValue b) { return a < b ? b : a; }
inline TimeValue min(TimeValue a, TimeValue b) { return b < a ? b : a; }

}  // namespace tact
