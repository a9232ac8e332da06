#pragma once

#include <cstdint>
#include <string>

namespace shapsec {

// Violation allowance of the adversary. `known` and `unknown` both cap the
// total at C; they differ only in whether the stopping rule may read C.
// `rate` allows floor(f * t) violations within the first t P-samples.
class Budget {
 public:
  enum class Kind { known, unknown, rate };

  static Budget known(std::int64_t cap);
  static Budget unknown(std::int64_t cap);
  static Budget rate(double fraction);
  static Budget none() { return known(0); }

  Kind kind() const { return kind_; }
  std::int64_t cap() const { return cap_; }
  double fraction() const { return fraction_; }
  std::int64_t used() const { return used_; }

  // Violations still allowed while generating P-sample `sample_index` (0-based).
  std::int64_t remaining(std::uint64_t sample_index) const;

  // Throws std::logic_error if `count` exceeds remaining(sample_index).
  void spend(std::int64_t count, std::uint64_t sample_index);

  std::string describe() const;

 private:
  Budget(Kind kind, std::int64_t cap, double fraction) : kind_(kind), cap_(cap), fraction_(fraction) {}

  Kind kind_;
  std::int64_t cap_;
  double fraction_;
  std::int64_t used_ = 0;
};

}  // namespace shapsec
