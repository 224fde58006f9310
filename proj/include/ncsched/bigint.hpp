#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncsched {

/// Minimal arbitrary-precision unsigned integer: base-2^32 limbs, little
/// endian. Supports exactly what binomial coefficients need — multiply and
/// exactly divide by small integers — plus decimal rendering.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  explicit BigUint(std::uint64_t v) {
    limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
  }

  void mul_small(std::uint32_t m) {
    std::uint64_t carry = 0;
    for (auto& l : limbs_) {
      const std::uint64_t prod = static_cast<std::uint64_t>(l) * m + carry;
      l = static_cast<std::uint32_t>(prod & 0xffffffffu);
      carry = prod >> 32;
    }
    while (carry) {
      limbs_.push_back(static_cast<std::uint32_t>(carry & 0xffffffffu));
      carry >>= 32;
    }
  }

  /// Divides by m, which must divide the value exactly.
  void div_small_exact(std::uint32_t m) {
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      const std::uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur / m);
      rem = cur % m;
    }
    if (rem != 0) throw std::logic_error("BigUint::div_small_exact: inexact division");
    trim();
  }

  void add(const BigUint& o) {
    std::uint64_t carry = 0;
    const std::size_t n = std::max(limbs_.size(), o.limbs_.size());
    limbs_.resize(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t s = carry + limbs_[i];
      if (i < o.limbs_.size()) s += o.limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(s & 0xffffffffu);
      carry = s >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  bool operator==(const BigUint& o) const { return limbs_ == o.limbs_; }

  double to_double() const {
    double v = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
    return v;
  }

  std::string to_string() const {
    std::vector<std::uint32_t> work = limbs_;
    std::string digits;
    auto all_zero = [&] {
      for (auto l : work)
        if (l) return false;
      return true;
    };
    if (all_zero()) return "0";
    while (!all_zero()) {
      std::uint64_t rem = 0;
      for (std::size_t i = work.size(); i-- > 0;) {
        const std::uint64_t cur = (rem << 32) | work[i];
        work[i] = static_cast<std::uint32_t>(cur / 10);
        rem = cur % 10;
      }
      digits.push_back(static_cast<char>('0' + rem));
    }
    return std::string(digits.rbegin(), digits.rend());
  }

 private:
  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }
  std::vector<std::uint32_t> limbs_;
};

/// Exact binomial coefficient C(n, k) via the multiplicative formula; the
/// running product stays integral after each division.
inline BigUint binomial(std::uint32_t n, std::uint32_t k) {
  if (k > n) return BigUint(0);
  if (k > n - k) k = n - k;
  BigUint c(1);
  for (std::uint32_t i = 1; i <= k; ++i) {
    c.mul_small(n - k + i);
    c.div_small_exact(i);
  }
  return c;
}

}  // namespace ncsched
