#include "shapsec/budget.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace shapsec {

Budget Budget::known(std::int64_t cap) {
  if (cap < 0) throw std::invalid_argument("violation budget must be non-negative");
  return Budget(Kind::known, cap, 0.0);
}

Budget Budget::unknown(std::int64_t cap) {
  if (cap < 0) throw std::invalid_argument("violation budget must be non-negative");
  return Budget(Kind::unknown, cap, 0.0);
}

Budget Budget::rate(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("violation rate must lie in [0, 1]");
  }
  return Budget(Kind::rate, 0, fraction);
}

std::int64_t Budget::remaining(std::uint64_t sample_index) const {
  std::int64_t allowed = cap_;
  if (kind_ == Kind::rate) {
    allowed = static_cast<std::int64_t>(
        std::floor(fraction_ * static_cast<double>(sample_index + 1) + 1e-9));
  }
  return std::max<std::int64_t>(0, allowed - used_);
}

void Budget::spend(std::int64_t count, std::uint64_t sample_index) {
  if (count < 0) throw std::invalid_argument("negative violation count");
  if (count > remaining(sample_index)) {
    throw std::logic_error("adversary exceeded its violation budget (" + describe() + ", used " +
                           std::to_string(used_) + ", requested " + std::to_string(count) +
                           " at sample " + std::to_string(sample_index) + ")");
  }
  used_ += count;
}

std::string Budget::describe() const {
  switch (kind_) {
    case Kind::known:
      return "known(" + std::to_string(cap_) + ")";
    case Kind::unknown:
      return "unknown(" + std::to_string(cap_) + ")";
    case Kind::rate: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "rate(%.12g)", fraction_);
      return buf;
    }
  }
  return "?";
}

}  // namespace shapsec
